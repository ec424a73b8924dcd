import csv
import io
import json

import pytest

from cli_configs import CONFIGS, argv_for
from preimlab.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def ok_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def test_preimage_envelope():
    doc = ok_json("preimage", "--fn", "phi", "--n", "4")
    assert doc["tool"] == "preimlab" and doc["version"]
    assert doc["report"]["preimages"] == [5, 8, 10, 12]
    assert doc["config"]["n"] == 4 and "workers" not in doc["config"]
    assert doc["sieve_limit"] == doc["config"]["sieve_limit"]
    doc = ok_json("preimage", "--fn", "pp", "--n", "16", "--levels")
    assert doc["report"]["levels"][0] == [17, 32, 34, 40, 48, 60]
    assert len(doc["report"]["levels"][1]) == 36


def test_count_csv():
    code, out, _ = run("count", "--fn", "s", "--from", "1", "--to", "24", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 24
    assert rows[23] == {"n": "24", "N": "3"}


def test_moments():
    rep = ok_json("moments", "rough", "--x", "1e4", "--fn", "phi")["report"]
    assert rep["empirical_sum"] == pytest.approx(18166.763607838002, rel=1e-15)
    assert rep["params"]["paper_parameterized"] is True
    assert rep["exponent_label"].startswith("proof-shape exponent")
    rep = ok_json("moments", "total", "--x", "1000", "--B", "1.2", "--fn", "phi")["report"]
    assert rep["empirical_sum"] == pytest.approx(2549.5119810559995, rel=1e-15)
    rep = ok_json("moments", "rough", "--x", "1e3", "--fn", "s", "--A", "1")["report"]
    assert rep["empirical_sum"] == 1000.0 and rep["params"]["paper_parameterized"] is False


def test_smooth():
    assert ok_json("smooth", "psi", "--x", "100", "--y", "5")["report"]["psi"] == 34
    assert ok_json("smooth", "pishift", "--x", "100", "--y", "3")["report"]["pi_smooth"] == 10
    assert ok_json("smooth", "phik", "--x", "30", "--y", "3", "--k", "1")["report"]["phi_k"] == 25
    rep = ok_json("smooth", "hyp1", "--x", "100", "--y", "3")["report"]
    assert rep["psi"] == 20 and rep["pi_x"] == 25


def test_partition_and_scan():
    rep = ok_json("partition", "--fn", "phi", "--inner", "p", "--n", "16", "--alpha", "0.5")["report"]
    assert rep["Q"] == [32, 40, 48, 60] and rep["extended_word"] == "pp"
    rows = ok_json("scan", "theorem1", "--fn", "pp", "--beta", "0.5", "--from", "16", "--to", "200")["report"]["rows"]
    assert rows[-1]["running_argmax"] == 192


def test_bounds():
    rep = ok_json("bounds", "lemma4", "--fn", "phi", "--d", "2", "--x", "10")["report"]
    assert rep["count"] == 8 and rep["holds"] is True
    assert rep["bound"] == pytest.approx(436.28273185865964)
    rep = ok_json("bounds", "lemma3", "--from", "1", "--to", "1")["report"]
    assert rep["argmax"] == 1


def test_sieve_build_and_cache(tmp_path):
    path = str(tmp_path / "c.spf")
    rep = ok_json("sieve", "build", "--limit", "1000", "--out", path)["report"]
    assert rep["prime_count"] == 168 and rep["bytes"] == 12 + 4 * 999
    doc = ok_json("smooth", "psi", "--x", "500", "--y", "7", "--sieve-cache", path)
    assert doc["sieve_limit"] == 1000
    code, _, err = run("smooth", "psi", "--x", "5000", "--y", "7", "--sieve-cache", path)
    assert code == 3 and "OutOfRangeError" in err


def test_csv_record_form():
    code, out, _ = run("preimage", "--fn", "phi", "--n", "4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["field", "value"]
    d = dict(rows[1:])
    assert d["preimages.len"] == "4" and d["preimages.3"] == "12"


def test_json_csv_agree():
    doc = ok_json("moments", "total", "--x", "500", "--B", "1.1", "--fn", "sigma")
    _, out, _ = run("moments", "total", "--x", "500", "--B", "1.1", "--fn", "sigma", "--format", "csv")
    d = dict(list(csv.reader(io.StringIO(out)))[1:])
    assert float(d["empirical_sum"]) == doc["report"]["empirical_sum"]
    assert d["params.c_variant"] == doc["report"]["params"]["c_variant"]


@pytest.mark.parametrize(
    "argv,code,kind",
    [
        (["preimage", "--fn", "phi"], 2, "UsageError"),
        (["preimage", "--fn", "tau", "--n", "4"], 2, "UsageError"),
        (["frobnicate"], 2, "UsageError"),
        (["preimage", "--fn", "pp", "--n", "720", "--cap", "3"], 4, "TruncationError"),
        (["moments", "total", "--x", "100", "--B", "1.5", "--fn", "phi"], 3, "DomainError"),
        (["scan", "theorem1", "--fn", "p", "--beta", "0", "--from", "2", "--to", "20"], 3, "DomainError"),
        (["bounds", "lemma4", "--fn", "phi", "--d", "1", "--x", "10"], 3, "DomainError"),
        (["smooth", "psi", "--x", "1000", "--y", "5", "--sieve-limit", "10"], 3, "OutOfRangeError"),
    ],
)
def test_errors(argv, code, kind):
    got, out, err = run(*argv)
    assert got == code and out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["error"] == kind


def test_count_empty_row():
    rows = ok_json("count", "--fn", "phi", "--from", "3", "--to", "3")["report"]["rows"]
    assert rows == [{"n": 3, "N": 0}]


def test_success_notes_go_to_stderr():
    code, out, err = run("smooth", "psi", "--x", "100", "--y", "5")
    assert code == 0 and err.startswith("built sieve to 100")


def _leaves(v, prefix=""):
    if isinstance(v, dict):
        for k, x in v.items():
            yield from _leaves(x, f"{prefix}.{k}" if prefix else k)
    elif isinstance(v, list):
        yield (f"{prefix}.len", len(v))
        for i, x in enumerate(v):
            yield from _leaves(x, f"{prefix}.{i}")
    else:
        yield (prefix, v)


def _same(cell, value):
    if value is None:
        return cell == ""
    if isinstance(value, bool):
        return cell == ("true" if value else "false")
    if isinstance(value, (int, float)):
        return float(cell) == value
    return cell == value


@pytest.mark.parametrize("cfg", CONFIGS, ids=lambda c: " ".join(c[:2]))
def test_csv_json_round_trip(cfg, tmp_path):
    (tmp_path / "j").mkdir()
    (tmp_path / "c").mkdir()
    doc = ok_json(*argv_for(cfg, tmp_path / "j"))
    code, out, err = run(*argv_for(cfg, tmp_path / "c"), "--format", "csv")
    assert code == 0, err
    rows = list(csv.reader(io.StringIO(out)))
    report = doc["report"]
    if list(report) == ["rows"]:
        header, body = rows[0], rows[1:]
        assert len(body) == len(report["rows"])
        for cells, want in zip(body, report["rows"]):
            assert header == list(want)
            assert all(_same(c, want[h]) for c, h in zip(cells, header))
    else:
        assert rows[0] == ["field", "value"]
        got = dict(rows[1:])
        want = dict(_leaves(report))
        want = {k: (str(tmp_path / "c" / "sieve.spf") if k == "path" else v) for k, v in want.items()}
        assert set(got) == set(want)
        assert all(_same(got[k], v) for k, v in want.items())
