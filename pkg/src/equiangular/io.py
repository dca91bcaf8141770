"""Dense matrix files: Matrix Market ``array`` format and plain CSV.

Values are written with 17 significant digits so a write/read round trip
reproduces every float exactly.
"""
import csv
import math
import os

import numpy as np

from .errors import DimensionMismatch, InputError, ParseError

MM_HEADER = "%%MatrixMarket matrix array real general"
FORMATS = ("mtx", "csv")


def _fmt(x):
    return "%.17g" % x


def infer_format(path, fmt=None):
    """``fmt`` if given, otherwise from the file extension (``.csv`` or Matrix Market)."""
    if fmt is not None:
        if fmt not in FORMATS:
            raise InputError(f"unknown matrix format {fmt!r}; use one of {FORMATS}")
        return fmt
    return "csv" if os.fspath(path).lower().endswith(".csv") else "mtx"


def _parse_float(token, line, column):
    try:
        x = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}", line, column) from None
    if not math.isfinite(x):
        raise ParseError(f"non-finite value {token!r}", line, column)
    return x


def parse_matrix_market(text):
    lines = text.splitlines()
    if not lines or lines[0].strip().lower() != MM_HEADER.lower():
        got = lines[0].strip() if lines else ""
        raise ParseError(f"expected header {MM_HEADER!r}, got {got!r}", 1)
    idx = 1
    while idx < len(lines) and (not lines[idx].strip() or lines[idx].lstrip().startswith("%")):
        idx += 1
    if idx == len(lines):
        raise ParseError("missing dimension line", idx + 1)
    dims = lines[idx].split()
    if len(dims) != 2:
        raise ParseError("dimension line must hold two integers", idx + 1)
    try:
        rows, cols = int(dims[0]), int(dims[1])
    except ValueError:
        raise ParseError("dimension line must hold two integers", idx + 1) from None
    if rows < 1 or cols < 1:
        raise ParseError(f"empty dimension {rows} x {cols}", idx + 1)
    values = []
    for lineno in range(idx + 2, len(lines) + 1):
        raw = lines[lineno - 1]
        if not raw.strip() or raw.lstrip().startswith("%"):
            continue
        for col, token in enumerate(raw.split(), start=1):
            values.append(_parse_float(token, lineno, col))
    if len(values) != rows * cols:
        raise DimensionMismatch(f"header declares {rows} x {cols} = {rows * cols} values, found {len(values)}")
    return np.array(values).reshape((rows, cols), order="F")


def parse_csv(text):
    rows = []
    width = None
    for lineno, fields in enumerate(csv.reader(text.splitlines()), start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        row = [_parse_float(f.strip(), lineno, col) for col, f in enumerate(fields, start=1)]
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"row has {len(row)} fields, expected {width}", lineno)
        rows.append(row)
    if not rows:
        raise ParseError("no data rows")
    return np.array(rows)


def read_matrix(path, fmt=None):
    """Read a dense real matrix.

    Raises
    ------
    ParseError
        With the 1-based line (and column where meaningful) of the problem.
    DimensionMismatch
        Value count disagrees with the Matrix Market header.
    """
    fmt = infer_format(path, fmt)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_csv(text) if fmt == "csv" else parse_matrix_market(text)


def format_matrix(m, fmt="mtx"):
    m = np.asarray(m, dtype=float)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2 or 0 in m.shape:
        raise InputError(f"cannot write a matrix of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    if fmt == "csv":
        return "".join(",".join(_fmt(x) for x in row) + "\n" for row in m)
    body = "".join(_fmt(x) + "\n" for x in m.ravel(order="F"))
    return f"{MM_HEADER}\n{m.shape[0]} {m.shape[1]}\n{body}"


def write_matrix(m, path, fmt=None):
    """Write ``m`` (a vector is written as one column)."""
    text = format_matrix(m, infer_format(path, fmt))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
