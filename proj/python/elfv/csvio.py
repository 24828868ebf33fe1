"""Readers for the CSV files written by the harness and the CLI."""

import csv
from pathlib import Path

# Column layout per file kind, in order.
SCHEMAS = {
    "diagnostics": ["step", "time", "tv", "min", "max", "mass", "n_etcs"],
    "regions": ["step", "first", "last", "case_tag"],
    "snapshot1d": ["x", "u"],
    "snapshot2d": ["x", "y", "u"],
    "error": ["N", "error", "order"],
    "sweep": ["C", "CFL", "error"],
    "theory": ["instance", "case_id", "table_tv", "oracle_tv", "separation_ok"],
}

_TEXT_COLUMNS = {"case_tag"}


class SchemaError(ValueError):
    pass


def kind_of(path):
    """Guess the schema from a harness file name."""
    name = Path(path).name
    for suffix, kind in (
        ("_diagnostics.csv", "diagnostics"),
        ("_regions.csv", "regions"),
        ("_error.csv", "error"),
        ("_convergence.csv", "error"),
        ("_sweep.csv", "sweep"),
        ("_theory.csv", "theory"),
    ):
        if name.endswith(suffix):
            return kind
    if "_snapshot_t" in name:
        with open(path, newline="") as f:
            header = next(csv.reader(f), [])
        return "snapshot2d" if header == SCHEMAS["snapshot2d"] else "snapshot1d"
    raise SchemaError(f"{name}: unknown file kind")


def read_csv(path, kind=None):
    """Returns {column: list}. Numbers become floats, empty cells None.

    Raises SchemaError naming the first missing or unexpected column.
    """
    kind = kind or kind_of(path)
    expected = SCHEMAS[kind]
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise SchemaError(f"{path}: empty file")
    header = rows[0]
    for col in expected:
        if col not in header:
            raise SchemaError(f"{path}: missing column '{col}'")
    for col in header:
        if col not in expected:
            raise SchemaError(f"{path}: unexpected column '{col}'")
    if header != expected:
        raise SchemaError(f"{path}: columns out of order, expected {','.join(expected)}")
    out = {col: [] for col in expected}
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(expected):
            raise SchemaError(f"{path}:{line}: expected {len(expected)} fields, got {len(row)}")
        for col, cell in zip(expected, row):
            if col in _TEXT_COLUMNS:
                out[col].append(cell)
            else:
                out[col].append(float(cell) if cell != "" else None)
    return out
