"""CSV and JSON output.

Every CSV has a header row, one row per record and a trailing summary row whose
first cell is ``summary``.  Columns only meaningful for the summary are left
empty in ordinary rows.  Floats use 17 significant digits so that repeated runs
with the same seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import platform
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np


def cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(value)


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def add(self, **values):
        self._check(values)
        self.rows.append(values)

    def _check(self, values):
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns {sorted(unknown)}")

    def lines(self):
        yield list(self.columns)
        for row in self.rows:
            yield [cell(row.get(c)) for c in self.columns]
        self._check(self.summary)
        last = [cell(self.summary.get(c)) for c in self.columns]
        last[0] = "summary"
        yield last

    def write(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for line in self.lines():
                writer.writerow(line)
        return path


def read_table(path):
    """``(header, rows, summary)`` from a CSV written by :class:`Table`."""
    with open(path, newline="") as fh:
        lines = list(csv.reader(fh))
    return lines[0], lines[1:-1], lines[-1]


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else cell(v)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path


def versions():
    import scipy

    from . import __version__

    return {"kgdesitter": __version__, "numpy": np.__version__, "scipy": scipy.__version__, "python": platform.python_version()}


def write_dat(path, columns, rows):
    """Whitespace-separated columns with a ``#`` header, readable by gnuplot."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("# " + " ".join(columns) + "\n")
        for row in rows:
            fh.write(" ".join(cell(v) for v in row) + "\n")
    return path
