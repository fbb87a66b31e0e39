"""Line schemas for emitted records, and JSONL / CSV writers."""

from __future__ import annotations

import csv
import io
import json

import jsonschema

__all__ = ["SCHEMAS", "record_kind", "validate_record", "validate_lines", "dumps", "write_records"]

_int = {"type": "integer"}
_opt_int = {"type": ["integer", "null"]}
_ratio = {"type": "string", "pattern": r"^-?\d+/\d+$"}

SCHEMAS = {
    "header": {
        "type": "object",
        "required": ["config", "version"],
        "properties": {"config": {"type": "string"}, "version": {"type": "string"}},
        "additionalProperties": False,
    },
    "hit": {
        "type": "object",
        "required": ["z", "x", "y", "sq_dists", "roots", "count", "tags"],
        "properties": {
            "z": {"type": "integer", "minimum": 1},
            "x": _int,
            "y": _int,
            "sq_dists": {"type": "array", "items": {"type": "integer", "minimum": 0},
                         "minItems": 4, "maxItems": 4},
            "roots": {"type": "array", "items": _opt_int, "minItems": 4, "maxItems": 4},
            "count": {"type": "integer", "minimum": 0, "maximum": 4},
            "tags": {"type": "array", "items": {"type": "string"}},
        },
        "additionalProperties": False,
    },
    "triple": {
        "type": "object",
        "required": ["s", "t", "p", "q", "r", "primitive"],
        "properties": {k: _int for k in "stpqr"} | {"primitive": {"type": "boolean"}},
        "additionalProperties": False,
    },
    "equation": {
        "type": "object",
        "required": ["family", "a", "b", "e"],
        "properties": {"family": {"type": "integer", "minimum": 1}, "a": _int, "b": _int,
                       "e": _opt_int},
        "additionalProperties": False,
    },
    "descent": {
        "type": "object",
        "required": ["descent_of", "result"],
        "properties": {
            "descent_of": {"type": "array", "items": _int, "minItems": 3, "maxItems": 3},
            "result": {"enum": ["smaller", "violation"]},
            "a": _int, "b": _int, "e": _int,
            "step": {"type": "string"}, "detail": {"type": "string"},
        },
        "additionalProperties": False,
    },
    "forced_k": {
        "type": "object",
        "required": ["probe", "mode", "n", "bound", "expected", "realized", "tuples", "deviations"],
        "properties": {
            "probe": {"const": "forced_k"},
            "mode": {"enum": ["theorem1", "theorem2", "theorem3"]},
            "n": _int, "bound": _int, "expected": _int,
            "realized": {"type": "array", "items": _int},
            "tuples": {"type": "array", "items": {"type": "array", "items": _int}},
            "deviations": {"type": "array", "items": {"type": "array", "items": _int}},
        },
        "additionalProperties": False,
    },
    "multipliers": {"type": "array", "items": {"type": "integer", "minimum": 2}},
    "heuristic": {
        "type": "object",
        "required": ["a0", "tail", "magnitudes", "rates", "slope"],
        "properties": {
            "a0": {"type": "integer", "minimum": 1},
            "tail": _ratio,
            "magnitudes": {"type": "array", "items": _int},
            "rates": {"type": "array", "items": _ratio},
            "slope": {"type": ["number", "null"]},
        },
        "additionalProperties": False,
    },
    "summary": {
        "type": "object",
        "required": ["summary"],
        "properties": {"summary": {"type": "string"}},
    },
}


def record_kind(rec) -> str:
    if isinstance(rec, list):
        return "multipliers"
    if "config" in rec:
        return "header"
    if "summary" in rec:
        return "summary"
    if "sq_dists" in rec:
        return "hit"
    if "descent_of" in rec:
        return "descent"
    if "family" in rec:
        return "equation"
    if rec.get("probe") == "forced_k":
        return "forced_k"
    if "r" in rec and "s" in rec:
        return "triple"
    if "a0" in rec:
        return "heuristic"
    raise ValueError(f"unrecognized record: {rec}")


def validate_record(rec) -> str:
    kind = record_kind(rec)
    jsonschema.validate(rec, SCHEMAS[kind])
    return kind


def validate_lines(lines) -> list[str]:
    """Re-parse JSONL output and validate every line; header first, summary last."""
    kinds = [validate_record(json.loads(line)) for line in lines if line.strip()]
    if not kinds or kinds[0] != "header" or kinds[-1] != "summary":
        raise ValueError("stream must start with a header and end with a summary")
    return kinds


def dumps(rec) -> str:
    return json.dumps(rec, separators=(",", ":"))


def _flat(v):
    if isinstance(v, list):
        return ";".join("" if x is None else (dumps(x) if isinstance(x, list) else str(x)) for x in v)
    if v is None:
        return ""
    return str(v)


def write_records(records, out, fmt: str = "jsonl") -> None:
    """Write header, results and summary. CSV puts header and summary on ``#`` lines."""
    if fmt == "jsonl":
        for rec in records:
            out.write(dumps(rec) + "\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")
    header, *body, summary = records
    out.write("# " + dumps(header) + "\n")
    columns = None
    for rec in body:
        row = {"value": rec} if isinstance(rec, list) else rec
        if columns is None or list(row) != columns:
            columns = list(row)
            out.write(",".join(columns) + "\n")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerow(_flat(row[c]) for c in columns)
        out.write(buf.getvalue())
    out.write("# " + dumps(summary) + "\n")
