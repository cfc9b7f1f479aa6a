"""Field and series I/O: CSV dumps with self-describing headers, plus
deterministic JSON. Floats are written with repr (shortest round-trip), so
re-running a configuration reproduces output files byte for byte."""

from __future__ import annotations

import csv
import json
from typing import Iterable, Sequence

import numpy as np

from .grid import Field, Grid

__all__ = ["save_field_csv", "load_field_csv", "export_csv", "write_json"]

_HEADER_KEYS = ["d", "n", "length", "nt", "t_end", "t0", "components",
                "time_periodic"]


def save_field_csv(field: Field, path) -> None:
    """Header line with the grid metadata, then the row-major samples, one
    per line."""
    meta = {
        "d": field.grid.d, "n": field.grid.n, "length": repr(field.grid.length),
        "nt": field.grid.nt if field.grid.has_time else "",
        "t_end": repr(field.grid.t_end) if field.grid.has_time else "",
        "t0": repr(field.grid.t0),
        "components": field.components,
        "time_periodic": int(field.time_periodic),
    }
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_HEADER_KEYS)
        w.writerow([meta[k] for k in _HEADER_KEYS])
        w.writerow(["value"])
        for v in field.data.ravel():
            w.writerow([repr(float(v))])


def load_field_csv(path) -> Field:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if header != _HEADER_KEYS:
            raise ValueError(f"unrecognized field file header in {path}")
        raw = dict(zip(header, next(r)))
        next(r)  # column title
        values = np.array([float(row[0]) for row in r])
    nt = int(raw["nt"]) if raw["nt"] else None
    t_end = float(raw["t_end"]) if raw["t_end"] else None
    grid = Grid(int(raw["d"]), int(raw["n"]), float(raw["length"]),
                nt=nt, t_end=t_end, t0=float(raw["t0"]))
    components = int(raw["components"])
    data = values.reshape(grid.shape + (components,))
    return Field(grid, data, components,
                 time_periodic=bool(int(raw["time_periodic"])))


def export_csv(rows: Iterable[Sequence], header: Sequence[str], path) -> None:
    """RFC-4180-style CSV with a declared header; empty input is an error."""
    rows = list(rows)
    if not rows:
        raise ValueError("refusing to write an empty series")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(header))
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (int, float, np.floating))
                        and not isinstance(v, bool) else v for v in row])


def write_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
