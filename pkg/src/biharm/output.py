"""Deterministic CSV/JSON writers (shortest round-trip float text)."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(path, header, rows) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with Path(path).open() as fh:
        r = csv.reader(fh)
        header = next(r)
        data = np.array([[float(v) for v in row] for row in r], dtype=float)
    return header, data


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def write_densities(path, density) -> None:
    g = density.grid
    rows = zip(g.theta, g.s, density.g1, density.g3)
    write_csv(path, ["theta", "s", "g1", "g3"], rows)


def write_field(path, fg) -> None:
    rows = fg.rows()
    write_csv(path, ["x", "y", "U1", "U2", "U3", "U4", "V", "mask"],
              ([*r[:7], int(r[7])] for r in rows))


def write_kernel_row(path, grid, values) -> None:
    rows = []
    for th, s, kv in zip(grid.theta, grid.s, values):
        rows.append([th, s, kv.k1.real, kv.k1.imag, kv.k2.real, kv.k2.imag, kv.a11, kv.a13, kv.a33])
    write_csv(path, ["theta", "s", "re_k1", "im_k1", "re_k2", "im_k2", "a11", "a13", "a33"], rows)
