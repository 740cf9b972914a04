"""Reading and writing distance matrices and report documents.

Two on-disk matrix forms:
    * JSON document with fields "labels" (list of strings) and "d"
      (list of n rows of n numbers); the primary interchange form.
    * flat comma-separated variant: first line is n, then n rows of n
      values; labels are generated as p0..p{n-1}.

Floats are written with 17 significant digits so a write/read round trip is
bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import InputFormatError
from .spaces import FiniteMetricSpace, validate_metric

__all__ = [
    "read_space",
    "write_space",
    "format_float",
    "dump_document",
]


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _matrix_from_rows(rows, n: int) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.float64)
    if arr.shape != (n, n):
        raise InputFormatError(f"expected {n}x{n} matrix, got shape {arr.shape}")
    return arr


def read_space(path: str | Path, validate: bool = True) -> FiniteMetricSpace:
    """Load a space from a JSON or flat comma-separated file.

    The format is sniffed: files whose first non-space byte is '{' parse as
    JSON. With validate=True (default) the full metric axiom check runs.
    """
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputFormatError(f"bad JSON in {path}: {e}") from e
        if not isinstance(doc, dict) or "d" not in doc:
            raise InputFormatError(f"{path}: expected object with a 'd' field")
        rows = doc["d"]
        n = len(rows)
        labels = doc.get("labels") or [f"p{i}" for i in range(n)]
        if len(labels) != n:
            raise InputFormatError(f"{path}: {len(labels)} labels for {n} rows")
    else:
        lines = [ln for ln in stripped.splitlines() if ln.strip()]
        if not lines:
            raise InputFormatError(f"{path}: empty file")
        try:
            n = int(lines[0].strip())
        except ValueError as e:
            raise InputFormatError(f"{path}: header must be the point count") from e
        if len(lines) - 1 != n:
            raise InputFormatError(f"{path}: header says {n} rows, found {len(lines) - 1}")
        try:
            rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
        except ValueError as e:
            raise InputFormatError(f"{path}: non-numeric entry") from e
        labels = [f"p{i}" for i in range(n)]

    arr = _matrix_from_rows(rows, n)
    if validate:
        return validate_metric(labels, arr)
    return FiniteMetricSpace(tuple(labels), arr)


def write_space(space: FiniteMetricSpace, path: str | Path, form: str = "json") -> None:
    """Write a space to disk in the requested form ("json" or "csv")."""
    p = Path(path)
    if form == "json":
        p.write_text(space_document(space))
    elif form == "csv":
        lines = [str(space.card)]
        for row in space.d:
            lines.append(",".join(format_float(v) for v in row))
        p.write_text("\n".join(lines) + "\n")
    else:
        raise InputFormatError(f"unknown matrix form {form!r}")


def space_document(space: FiniteMetricSpace) -> str:
    rows = [
        "[" + ", ".join(format_float(v) for v in row) + "]" for row in space.d
    ]
    labels = json.dumps(list(space.labels))
    body = ",\n    ".join(rows)
    return '{\n  "labels": %s,\n  "d": [\n    %s\n  ]\n}\n' % (labels, body)


def dump_document(doc: dict, path: str | Path | None = None) -> str:
    """Serialize a report dict deterministically (sorted keys, full floats)."""

    def default(o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(f"unserializable {type(o)}")

    text = json.dumps(doc, sort_keys=True, indent=2, default=default)
    text += "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
