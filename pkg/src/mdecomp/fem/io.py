"""Boundary-condition files and the per-Gauss-point results table.

Boundary-condition file, one entry per line, ``#`` comments::

    fix  node dir value     # prescribed displacement
    load node dir value     # nodal force, accumulated if repeated

``dir`` is 0, 1 (or 2 in 3D).
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from mdecomp.fem.assembly import BoundaryConditions
from mdecomp.fem.recovery import FieldRecovery


class BoundaryFileError(ValueError):
    """Malformed boundary-condition file."""


def read_bcs(path) -> BoundaryConditions:
    bcs = BoundaryConditions()
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] not in ("fix", "load"):
            raise BoundaryFileError(f"line {lineno}: expected 'fix|load node dir value', got {raw!r}")
        try:
            node, direction, value = int(parts[1]), int(parts[2]), float(parts[3])
        except ValueError as exc:
            raise BoundaryFileError(f"line {lineno}: {exc}") from exc
        if not np.isfinite(value):
            raise BoundaryFileError(f"line {lineno}: non-finite value")
        try:
            getattr(bcs, parts[0])(node, direction, value)
        except ValueError as exc:
            raise BoundaryFileError(f"line {lineno}: {exc}") from exc
    return bcs


def results_columns(dim: int) -> list[str]:
    coords = ["x", "y"] if dim == 2 else ["x", "y", "z"]
    return (["elem", "gp"] + coords
            + ["s11", "s22", "s33", "s12", "s23", "s31", "p", "J2", "u_dev", "u_vol"])


def write_results(fields: FieldRecovery, path) -> None:
    """One row per (element, Gauss point); floats with 17 significant digits."""
    ne, nq, dim = fields.points.shape
    s = fields.s
    comps = np.stack([s[..., 0, 0], s[..., 1, 1], s[..., 2, 2],
                      s[..., 0, 1], s[..., 1, 2], s[..., 2, 0]], axis=-1)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(results_columns(dim))
        for e in range(ne):
            for q in range(nq):
                vals = [*fields.points[e, q], *comps[e, q], fields.p[e, q],
                        fields.J2[e, q], fields.u_dev[e, q], fields.u_vol[e, q]]
                w.writerow([e, q] + [format(float(v), ".17g") for v in vals])
