"""JSON and CSV encoding of reports.

Reals are written with 17 significant digits, integers at or above 2**53
as decimal strings, and NaN/inf as null. A report whose data is
``{"rows": [...]}`` is a table and becomes a wide CSV; anything else is a
record and becomes ``field,value`` pairs keyed by dotted paths.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math

from .arith import ArithWord, Fn

_SAFE_INT = 2**53


def to_data(obj):
    """Reduce dataclasses, enums, words and containers to plain JSON types."""
    if isinstance(obj, ArithWord):
        return str(obj)
    if isinstance(obj, Fn):
        return "phi" if obj is Fn.PHI else "sigma"
    if isinstance(obj, enum.Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: to_data(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        for name in getattr(obj, "REPORT_EXTRAS", ()):
            out[name] = to_data(getattr(obj, name))
        return out
    if isinstance(obj, dict):
        return {str(k): to_data(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_data(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return obj.item()
    return obj


def scalar_text(v) -> str:
    """Canonical text of a scalar, shared by both encodings."""
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return json.dumps(str(v)) if abs(v) >= _SAFE_INT else str(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            return "null"
        text = format(v, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    return json.dumps(v)


def dumps_json(data, indent: int = 2) -> str:
    def emit(v, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {emit(x, level + 1)}" for k, x in v.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(v, list):
            if not v:
                return "[]"
            if all(not isinstance(x, (dict, list)) for x in v):
                return "[" + ", ".join(scalar_text(x) for x in v) + "]"
            return "[\n" + ",\n".join(pad + emit(x, level + 1) for x in v) + "\n" + end + "]"
        return scalar_text(v)

    return emit(data, 0) + "\n"


def is_table(data) -> bool:
    return (
        isinstance(data, dict)
        and list(data) == ["rows"]
        and all(isinstance(r, dict) for r in data["rows"])
    )


def cell_text(v) -> str:
    """CSV cell: like scalar_text but without JSON quoting of strings."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, int) and not isinstance(v, bool) and abs(v) >= _SAFE_INT:
        return str(v)
    if isinstance(v, float) and not math.isfinite(v):
        return ""
    return scalar_text(v)


def flatten(data, prefix=""):
    """``[(dotted_path, cell_text), ...]`` for every leaf, in document order."""
    out = []
    if isinstance(data, dict):
        if not data:
            out.append((prefix, ""))
        for k, v in data.items():
            out.extend(flatten(v, f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(data, list):
        out.append((f"{prefix}.len" if prefix else "len", str(len(data))))
        for i, v in enumerate(data):
            out.extend(flatten(v, f"{prefix}.{i}" if prefix else str(i)))
    else:
        out.append((prefix, cell_text(data)))
    return out


def dumps_csv(data) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if is_table(data):
        rows = data["rows"]
        columns = list(rows[0]) if rows else []
        writer.writerow(columns)
        for r in rows:
            writer.writerow([cell_text(r.get(c)) for c in columns])
    else:
        writer.writerow(["field", "value"])
        writer.writerows(flatten(data))
    return buf.getvalue()


def envelope(tool: str, version: str, config: dict, sieve_limit, report) -> dict:
    return {
        "tool": tool,
        "version": version,
        "config": config,
        "sieve_limit": sieve_limit,
        "report": report,
    }
