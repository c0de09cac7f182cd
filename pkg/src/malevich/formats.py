"""Byte-stable CSV/JSON emission and the matrix file format."""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, TextIO

import numpy as np

from .exceptions import MalevichError

SCHEMA = "malevich-qstate v1"
FLOAT_FORMAT = ".12g"


class MatrixFileError(MalevichError):
    """Matrix file parses as JSON but does not describe a square complex matrix."""


def format_value(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        s = format(float(x), FLOAT_FORMAT)
        return "0" if s == "-0" else s
    return str(x)


def write_csv(stream: TextIO, command: str, columns: Iterable[str], rows: Iterable[Iterable[Any]]) -> int:
    """Write the schema header, the column row and data rows; return the row count."""
    stream.write(f"# {SCHEMA} {command}\n")
    stream.write(",".join(columns) + "\n")
    n = 0
    for row in rows:
        stream.write(",".join(format_value(v) for v in row) + "\n")
        n += 1
    return n


def flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    """Dotted ``key, value`` pairs of a nested report, keys sorted."""
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out += flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, (list, tuple)):
        out = []
        for i, v in enumerate(obj):
            out += flatten(v, f"{prefix}.{i}")
        return out
    return [(prefix, obj)]


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return matrix_to_json(obj)
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return 0.0 if x == 0 else x
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def dumps(report: Any) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    clean = lambda a: [0.0 if x == 0 else float(x) for x in a.ravel()]
    return {"dim": n, "re": clean(m.real), "im": clean(m.imag)}


def matrix_from_json(data: Any) -> np.ndarray:
    """Parse ``{"dim": n, "re": [...], "im": [...]}`` with row-major entries."""
    if not isinstance(data, dict) or "dim" not in data or "re" not in data:
        raise MatrixFileError("matrix file needs fields 'dim', 're' and 'im'")
    n = data["dim"]
    if not isinstance(n, int) or n < 1:
        raise MatrixFileError(f"'dim' must be a positive integer, got {n!r}")
    re = data["re"]
    im = data.get("im", [0.0] * (n * n))
    if len(re) != n * n or len(im) != n * n:
        raise MatrixFileError(f"'re' and 'im' need {n * n} entries each")
    try:
        vals = [complex(float(a), float(b)) for a, b in zip(re, im)]
    except (TypeError, ValueError) as exc:
        raise MatrixFileError(f"non-numeric matrix entry: {exc}") from exc
    if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
        raise MatrixFileError("matrix entries must be finite")
    return np.array(vals, dtype=complex).reshape(n, n)


def read_matrix(path: str) -> np.ndarray:
    """Read a matrix file. ``OSError`` propagates; malformed content raises :class:`MatrixFileError`."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{path}: not valid JSON ({exc})") from exc
    return matrix_from_json(data)
