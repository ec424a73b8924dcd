"""Command-line entry point.

Each subcommand writes exactly one report to stdout; failures print a
single JSON line to stderr and exit nonzero. Configuration comes from
flags only.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import __version__
from .arith import ArithWord, Fn, build_sieve, load_sieve, prime_count, save_sieve
from .errors import DomainError, OutOfRangeError, PreimlabError, TruncationError
from .inverse import DEFAULT_CAP, Inverter
from .moments import (
    CVariant,
    MomentParamsA,
    MomentParamsB,
    empirical_moment_rough,
    empirical_moment_total,
)
from .prooflab import (
    BoundParams,
    count_multiples,
    lemma3_ratios,
    lemma4_bound,
    partition_pqr,
    theorem1_scan,
)
from .report import dumps_csv, dumps_json, envelope, to_data
from .smooth import hypothesis1_report, phi_smooth_count, pi_smooth_shifted, psi_count

TOOL = "preimlab"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_TRUNCATED = 4

# flags that never change the report and so stay out of the embedded config
_NOT_CONFIG = {"workers", "handler", "cmd", "sub", "notes"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _word(text):
    try:
        return ArithWord.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fn(text):
    try:
        return Fn.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


# ---------------------------------------------------------------------------
# sieve handling
# ---------------------------------------------------------------------------


def _sieve_for(args, needed: int):
    """Load or build the sieve; ``--sieve-limit`` overrides ``needed``."""
    limit = args.sieve_limit if args.sieve_limit is not None else max(2, needed)
    path = args.sieve_cache
    if path and os.path.exists(path):
        sieve = load_sieve(path)
        if sieve.limit < limit:
            raise OutOfRangeError(f"cached sieve {path} has limit {sieve.limit} < {limit}")
        return sieve
    t0 = time.perf_counter()
    sieve = build_sieve(limit)
    # held back until success so that a failure leaves exactly one stderr line
    args.notes.append(f"built sieve to {limit} in {time.perf_counter() - t0:.2f}s")
    if path:
        save_sieve(sieve, path)
    return sieve


def _inverse_limit(n):
    # primality tests on d + 1 for divisors d of n; deeper levels fall back
    # to Miller-Rabin
    return max(1000, 4 * (n + 1))


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (report_data, sieve_limit)
# ---------------------------------------------------------------------------


def cmd_preimage(args):
    sieve = _sieve_for(args, _inverse_limit(args.n))
    res = Inverter(sieve, args.cap).levels(args.fn, args.n)
    if res.truncated:
        raise TruncationError(f"preimages of {args.n} under {args.fn} exceed cap {args.cap}")
    data = {"target": res.target, "word": str(res.word)}
    if args.levels:
        data["levels"] = [list(lv) for lv in res.levels]
    else:
        data["preimages"] = list(res.deepest)
    data["truncated"] = res.truncated
    return data, sieve.limit


def cmd_count(args):
    if args.to < args.frm:
        raise DomainError(f"empty range [{args.frm}, {args.to}]")
    sieve = _sieve_for(args, _inverse_limit(args.to))
    inv = Inverter(sieve, args.cap)
    rows = [{"n": n, "N": inv.count(args.fn, n)} for n in range(args.frm, args.to + 1)]
    return {"rows": rows}, sieve.limit


def cmd_moments(args):
    sieve = _sieve_for(args, math.floor(args.x) + 1)
    if args.sub == "rough":
        params = MomentParamsA(args.x, args.eta, A_override=args.A, z_override=args.z)
        rep = empirical_moment_rough(sieve, args.fn, params, args.workers)
    else:
        params = MomentParamsB(args.B, args.x, CVariant(args.variant))
        rep = empirical_moment_total(sieve, args.fn, params, args.workers)
    return to_data(rep), sieve.limit


def cmd_smooth(args):
    sieve = _sieve_for(args, math.floor(args.x))
    w = args.workers
    if args.sub == "psi":
        data = {"x": args.x, "y": args.y, "psi": psi_count(sieve, args.x, args.y, w)}
    elif args.sub == "pishift":
        data = {
            "x": args.x,
            "y": args.y,
            "pi_smooth": pi_smooth_shifted(sieve, args.x, args.y, w),
            "pi_x": prime_count(sieve, args.x),
        }
    elif args.sub == "phik":
        data = {
            "k": args.k,
            "x": args.x,
            "y": args.y,
            "phi_k": phi_smooth_count(sieve, args.k, args.x, args.y, w),
        }
    else:
        data = to_data(hypothesis1_report(sieve, args.x, args.y, w))
    return data, sieve.limit


def cmd_partition(args):
    sieve = _sieve_for(args, _inverse_limit(args.n))
    params = BoundParams(len(args.inner), args.alpha, eta=args.eta)
    rep = partition_pqr(sieve, args.fn, args.inner, args.n, params, Inverter(sieve, args.cap))
    return to_data(rep), sieve.limit


def cmd_scan(args):
    sieve = _sieve_for(args, _inverse_limit(args.to))
    rows = theorem1_scan(sieve, args.fn, args.beta, args.frm, args.to, args.cap)
    return {"rows": to_data(rows)}, sieve.limit


def cmd_bounds(args):
    if args.sub == "lemma3":
        sieve = _sieve_for(args, args.to)
        rep = lemma3_ratios(sieve, args.frm, args.to, args.workers)
        return to_data(rep), sieve.limit
    sieve = _sieve_for(args, math.floor(args.x))
    count = count_multiples(sieve, args.fn, args.d, args.x, args.workers)
    bound = lemma4_bound(args.d, args.x, sieve)
    ell = sum(e for _, e in sieve.factor(args.d).factors)
    data = {
        "fn": to_data(args.fn),
        "d": args.d,
        "x": args.x,
        "ell": ell,
        "count": count,
        "bound": bound,
        "holds": count <= bound,
    }
    return data, sieve.limit


def cmd_sieve(args):
    sieve = build_sieve(args.limit)
    save_sieve(sieve, args.out)
    data = {
        "path": args.out,
        "limit": sieve.limit,
        "prime_count": prime_count(sieve, sieve.limit),
        "bytes": os.path.getsize(args.out),
    }
    return data, sieve.limit


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--sieve-limit", type=int, default=None,
                   help="sieve size (default: what the command needs)")
    g.add_argument("--sieve-cache", default=None, help="SPF1 cache file to load or create")
    g.add_argument("--workers", type=_positive_int, default=1)
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP,
                   help="maximum preimage-set size per level")

    parser = _Parser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    subs = parser.add_subparsers(dest="cmd", required=True)

    p = subs.add_parser("preimage", parents=[common], help="inverse images of one target")
    p.add_argument("--fn", type=_word, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--levels", action="store_true")
    p.set_defaults(handler=cmd_preimage)

    p = subs.add_parser("count", parents=[common], help="preimage counts over a range")
    p.add_argument("--fn", type=_word, required=True)
    p.add_argument("--from", dest="frm", type=_positive_int, required=True)
    p.add_argument("--to", type=_positive_int, required=True)
    p.set_defaults(handler=cmd_count)

    p = subs.add_parser("moments", help="moment sums of Omega over phi/sigma values")
    msub = p.add_subparsers(dest="sub", required=True)
    q = msub.add_parser("rough", parents=[common])
    q.add_argument("--x", type=float, required=True)
    q.add_argument("--eta", type=float, default=0.5)
    q.add_argument("--fn", type=_fn, required=True)
    q.add_argument("--A", type=float, default=None, help="override A (report is no longer default-parameterized)")
    q.add_argument("--z", type=float, default=None, help="override z (report is no longer default-parameterized)")
    q.set_defaults(handler=cmd_moments)
    q = msub.add_parser("total", parents=[common])
    q.add_argument("--x", type=float, required=True)
    q.add_argument("--B", type=float, required=True)
    q.add_argument("--variant", choices=[v.value for v in CVariant], default="quarter")
    q.add_argument("--fn", type=_fn, required=True)
    q.set_defaults(handler=cmd_moments)

    p = subs.add_parser("smooth", help="smooth-number counts")
    ssub = p.add_subparsers(dest="sub", required=True)
    for name in ("psi", "pishift", "phik", "hyp1"):
        q = ssub.add_parser(name, parents=[common])
        q.add_argument("--x", type=float, required=True)
        q.add_argument("--y", type=float, required=True)
        if name == "phik":
            q.add_argument("--k", type=int, required=True)
        q.set_defaults(handler=cmd_smooth)

    p = subs.add_parser("partition", parents=[common], help="P/Q/R split of a preimage set")
    p.add_argument("--fn", type=_fn, required=True)
    p.add_argument("--inner", type=_word, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eta", type=float, default=0.5)
    p.set_defaults(handler=cmd_partition)

    p = subs.add_parser("scan", help="ratio scans")
    tsub = p.add_subparsers(dest="sub", required=True)
    q = tsub.add_parser("theorem1", parents=[common])
    q.add_argument("--fn", type=_word, required=True)
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--from", dest="frm", type=_positive_int, required=True)
    q.add_argument("--to", type=_positive_int, required=True)
    q.set_defaults(handler=cmd_scan)

    p = subs.add_parser("bounds", help="sigma/phi extremes and divisibility bounds")
    bsub = p.add_subparsers(dest="sub", required=True)
    q = bsub.add_parser("lemma3", parents=[common])
    q.add_argument("--from", dest="frm", type=_positive_int, required=True)
    q.add_argument("--to", type=_positive_int, required=True)
    q.set_defaults(handler=cmd_bounds)
    q = bsub.add_parser("lemma4", parents=[common])
    q.add_argument("--fn", type=_fn, required=True)
    q.add_argument("--d", type=_positive_int, required=True)
    q.add_argument("--x", type=float, required=True)
    q.set_defaults(handler=cmd_bounds)

    p = subs.add_parser("sieve", help="sieve cache files")
    vsub = p.add_subparsers(dest="sub", required=True)
    q = vsub.add_parser("build", parents=[common])
    q.add_argument("--limit", type=int, required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(handler=cmd_sieve)
    return parser


def _config(args, limit) -> dict:
    cfg = {"command": " ".join(x for x in (args.cmd, getattr(args, "sub", None)) if x)}
    for k, v in vars(args).items():
        if k not in _NOT_CONFIG:
            cfg[k] = to_data(v)
    cfg["sieve_limit"] = limit
    return cfg


def _fail(kind, message, code, stderr):
    print(json.dumps({"error": kind, "message": " ".join(str(message).split())}), file=stderr)
    return code


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail("UsageError", exc, EXIT_USAGE, stderr)
    args.notes = []
    try:
        data, limit = args.handler(args)
    except TruncationError as exc:
        return _fail("TruncationError", exc, EXIT_TRUNCATED, stderr)
    except (DomainError, OutOfRangeError) as exc:
        return _fail(type(exc).__name__, exc, EXIT_DOMAIN, stderr)
    except (PreimlabError, ValueError, OSError, MemoryError) as exc:
        return _fail(type(exc).__name__, exc, EXIT_FAILURE, stderr)
    for note in args.notes:
        print(note, file=stderr)
    if args.format == "csv":
        stdout.write(dumps_csv(data))
    else:
        stdout.write(dumps_json(envelope(TOOL, __version__, _config(args, limit), limit, data)))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
