"""Locking benchmarks comparing full and selectively reduced integration.

``block``
    Plane-strain punch on a unit square: bottom edge clamped, left edge a
    symmetry plane (``u_x = 0``), uniform pressure on the left half of the top
    edge. Monitored: vertical displacement of the top-left corner. Reference:
    the same problem on a fine mesh with volumetric reduced integration.
``cantilever``
    Plane-strain beam of length ``aspect * h``, clamped at ``x = 0``, tip
    shear load ``P`` split over the end nodes. Monitored: mean tip
    deflection. Reference: ``P L**3 / (3 E' I)`` with the plane-strain
    modulus ``E' = E / (1 - nu**2)``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from mdecomp.elasticity import constitutive_law, material_from
from mdecomp.fem.assembly import BoundaryConditions, assemble, solve
from mdecomp.fem.element import VOL_REDUCED, IntegrationScheme, scheme_named
from mdecomp.fem.mesh import rectangle_mesh

BLOCK = "block"
CANTILEVER = "cantilever"

REPORT_COLUMNS = ("scheme", "mesh", "monitored_disp", "ref_disp", "rel_error",
                  "energy_dev_fraction")


@dataclass(frozen=True)
class Run:
    monitored: float
    energy_dev_fraction: float


@dataclass(frozen=True)
class LockingRow:
    scheme: str
    mesh: str
    monitored_disp: float
    ref_disp: float
    rel_error: float
    energy_dev_fraction: float


def _energy_fraction(system, u) -> float:
    total = u @ (system.K @ u)
    return float(u @ (system.Kd @ u) / total) if total else 0.0


def _edge_loads(mask: np.ndarray, h: float) -> np.ndarray:
    """Consistent nodal forces of a unit traction on the masked edge nodes,
    which must be sorted and evenly spaced by ``h``."""
    w = np.where(mask, h, 0.0)
    first = np.flatnonzero(mask)[0]
    last = np.flatnonzero(mask)[-1]
    w[first] = w[last] = h / 2
    return w


def run_block(n: int, nu: float, scheme: IntegrationScheme, E: float = 1.0,
              pressure: float = 1.0) -> Run:
    if not nu <= 0.4999:
        raise ValueError(f"block benchmark needs nu <= 0.4999, got {nu}")
    mesh = rectangle_mesh(1.0, 1.0, n, n)
    x, y = mesh.nodes.T
    bottom = np.flatnonzero(np.isclose(y, 0.0))
    left = np.flatnonzero(np.isclose(x, 0.0))
    top = np.flatnonzero(np.isclose(y, 1.0))
    top = top[np.argsort(x[top])]
    bcs = BoundaryConditions().fix(bottom, 0).fix(bottom, 1).fix(left, 0)
    loaded = x[top] <= 0.5 + 1e-12
    for node, w in zip(top, _edge_loads(loaded, 1.0 / n)):
        if w:
            bcs.load(node, 1, -pressure * w)
    system = assemble(mesh, constitutive_law(material_from(E, nu)), scheme, bcs)
    u = solve(system)
    corner = top[0]
    return Run(float(u[2 * corner + 1]), _energy_fraction(system, u))


def run_cantilever(nx: int, ny: int, nu: float, scheme: IntegrationScheme,
                   aspect: float = 100.0, E: float = 1000.0, load: float = 1e-3) -> Run:
    h = 1.0
    length = aspect * h
    mesh = rectangle_mesh(length, h, nx, ny)
    x = mesh.nodes[:, 0]
    root = np.flatnonzero(np.isclose(x, 0.0))
    tip = np.flatnonzero(np.isclose(x, length))
    bcs = BoundaryConditions().fix(root, 0).fix(root, 1)
    bcs.load(tip, 1, -load / len(tip))
    system = assemble(mesh, constitutive_law(material_from(E, nu)), scheme, bcs)
    u = solve(system)
    return Run(float(-u[2 * tip + 1].mean()), _energy_fraction(system, u))


def beam_tip_deflection(aspect: float, nu: float, E: float = 1000.0, load: float = 1e-3) -> float:
    """Euler-Bernoulli ``P L**3 / (3 E' I)`` for unit height and thickness."""
    length = aspect
    inertia = 1.0 / 12.0
    e_plane = E / (1.0 - nu ** 2)
    return load * length ** 3 / (3.0 * e_plane * inertia)


def locking_study(benchmark: str, schemes=("full", "vol-reduced", "dev-reduced"),
                  mesh_sizes=None, nu: float | None = None,
                  reference_size: int = 64) -> list[LockingRow]:
    """Run every scheme on every mesh size and compare with the reference.

    ``mesh_sizes`` are ``n`` (an ``n x n`` mesh) for the block and
    ``(nx, ny)`` pairs for the cantilever. Defaults: block ``nu = 0.4999``,
    sizes ``[8]``; cantilever ``nu = 0.3``, sizes ``[(100, 1)]``.
    """
    schemes = [scheme_named(s) if isinstance(s, str) else s for s in schemes]
    rows = []
    if benchmark == BLOCK:
        nu = 0.4999 if nu is None else nu
        sizes = [8] if mesh_sizes is None else list(mesh_sizes)
        ref = run_block(reference_size, nu, VOL_REDUCED).monitored
        for n in sizes:
            for s in schemes:
                r = run_block(int(n), nu, s)
                rows.append(_row(s, f"{n}x{n}", r, ref))
    elif benchmark == CANTILEVER:
        nu = 0.3 if nu is None else nu
        sizes = [(100, 1)] if mesh_sizes is None else list(mesh_sizes)
        ref = beam_tip_deflection(100.0, nu)
        for nx, ny in sizes:
            for s in schemes:
                r = run_cantilever(int(nx), int(ny), nu, s)
                rows.append(_row(s, f"{nx}x{ny}", r, ref))
    else:
        raise ValueError(f"unknown benchmark {benchmark!r}; use {BLOCK!r} or {CANTILEVER!r}")
    return rows


def _row(scheme: IntegrationScheme, mesh: str, run: Run, ref: float) -> LockingRow:
    return LockingRow(scheme.name, mesh, run.monitored, ref,
                      abs(run.monitored - ref) / abs(ref), run.energy_dev_fraction)


def write_report(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for r in rows:
            w.writerow([r.scheme, r.mesh] + [format(v, ".17g") for v in
                       (r.monitored_disp, r.ref_disp, r.rel_error, r.energy_dev_fraction)])
