"""CSV reading and writing for label, score and probability matrices.

Files hold one instance per row.  A header row is optional and is detected
by the first row containing any cell that does not parse as a number.
Floats are written with 17 significant digits so that a write followed by
a read reproduces every value exactly.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .exceptions import CSVFormatError

FLOAT_FORMAT = ".17g"


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _parse(path):
    header = None
    rows: list[list[float]] = []
    lines: list[int] = []
    with open(path, newline="") as fh:
        for lineno, raw in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in raw]
            if not cells or all(c == "" for c in cells):
                continue
            if header is None and not rows and not all(_is_number(c) for c in cells):
                header = cells
                continue
            values = []
            for col, cell in enumerate(cells, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise CSVFormatError(f"cannot parse {cell!r} as a number", lineno, col) from None
                if math.isnan(v):
                    raise CSVFormatError("NaN is not allowed", lineno, col)
                values.append(v)
            rows.append(values)
            lines.append(lineno)
    return header, rows, lines


def read_rows(path) -> tuple[list[str] | None, list[list[float]]]:
    """Read a numeric CSV, returning ``(header, rows)``.

    Rows may differ in length.  Blank lines are skipped.

    Raises
    ------
    CSVFormatError
        On the first cell that is not a number, with its row and column.
    """
    header, rows, _ = _parse(path)
    return header, rows


def _read_rectangular(path):
    _, rows, lines = _parse(path)
    if not rows:
        raise CSVFormatError("file contains no data rows", 1, 1)
    width = len(rows[0])
    for r, lineno in zip(rows, lines):
        if len(r) != width:
            raise CSVFormatError(f"expected {width} columns, found {len(r)}", lineno, len(r))
    return np.array(rows, dtype=np.float64), lines


def read_score_matrix(path) -> np.ndarray:
    """Read an n x m matrix of real scores."""
    return _read_rectangular(path)[0]


def read_label_matrix(path) -> np.ndarray:
    """Read an n x m matrix whose entries are all exactly 0 or 1."""
    arr, lines = _read_rectangular(path)
    bad = np.argwhere((arr != 0) & (arr != 1))
    if bad.size:
        i, j = bad[0]
        raise CSVFormatError(f"label value {arr[i, j]!r} is not 0 or 1", lines[i], int(j) + 1)
    return arr.astype(np.int8)


def format_value(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), FLOAT_FORMAT)


def write_matrix(path, matrix, header=None) -> Path:
    """Write a 2-D array (or list of rows) as CSV."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if header is not None:
            w.writerow(header)
        for row in matrix:
            w.writerow([format_value(v) for v in np.atleast_1d(row)])
    return path


def write_table(path, rows: list[dict], columns=None, comment=None) -> Path:
    """Write a list of dicts as CSV, optionally preceded by a ``# comment`` line."""
    path = Path(path)
    if columns is None:
        columns = list(rows[0]) if rows else []
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh)
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c, "")) for c in columns])
    return path


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, float, np.integer, np.floating)):
        return format_value(v)
    return v


def read_table(path) -> list[dict]:
    """Read a table written by :func:`write_table`; cells stay strings."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))
