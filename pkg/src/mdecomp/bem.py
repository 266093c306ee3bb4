"""Interior stress and strain from boundary data, split by the multipliers.

Boundary data (traction ``t`` and displacement ``u``) are known inputs on a
closed polygon of straight, constant-valued segments. Interior fields follow
from the Somigliana identity

    sigma_ij(xi) = sum_seg  int (G_kij t_k - F_kij u_k) dS

with 8-point Gauss quadrature per segment. Evaluation is restricted to points
at least ``min_distance`` from the boundary; near-singular and boundary-point
evaluation are not supported.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Protocol

import numpy as np

from mdecomp.elasticity import IsotropicMaterial, compliance_tensor
from mdecomp.tensor_core import DEV, STRAIN, STRESS, VOL, SymTensor2, multiplier_rank4

N_GAUSS = 8
#: default distance floor as a fraction of the shortest segment
DISTANCE_FACTOR = 0.1
_CLOSE_TOL = 1e-10

RESULT_COLUMNS = ("x", "y", "s11", "s22", "s12", "p", "e11_dev", "e22_dev", "e12_dev", "e_mean")


class BoundaryError(ValueError):
    """Boundary polygon is not a closed counterclockwise loop, or bad data."""


class ProximityError(ValueError):
    """Field point lies on or too close to the boundary."""


class KernelValues(NamedTuple):
    """Kernel values at ``nq`` boundary points, each shaped ``(nq, 2, 3, 3)``.

    Axis 1 is the in-plane direction ``k`` of the traction/displacement;
    the trailing ``3 x 3`` is the symmetric field tensor ``ij``.
    """

    G_sigma: np.ndarray
    F_sigma: np.ndarray
    G_eps: np.ndarray
    F_eps: np.ndarray


class KernelProvider(Protocol):
    def evaluate(self, xi: np.ndarray, x: np.ndarray, n: np.ndarray) -> KernelValues:
        """Kernels for field point ``xi`` (2,), boundary points ``x`` and
        outward normals ``n`` (both ``(nq, 2)``)."""
        ...


@dataclass(frozen=True, eq=False)
class BoundaryMesh:
    """Closed polygon of segments with constant traction and displacement.

    ``starts``/``ends`` are ``(nseg, 2)``; segment ``k`` must end where
    segment ``k + 1`` starts (cyclically). The loop must be counterclockwise
    so that ``(dy, -dx) / L`` points out of the domain.
    """

    starts: np.ndarray
    ends: np.ndarray
    traction: np.ndarray
    displacement: np.ndarray
    lengths: np.ndarray = field(init=False, repr=False)
    normals: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        arrays = {}
        for name in ("starts", "ends", "traction", "displacement"):
            a = np.array(getattr(self, name), dtype=float)
            if a.ndim != 2 or a.shape[1] != 2:
                raise BoundaryError(f"{name} must have shape (nseg, 2), got {a.shape}")
            if not np.all(np.isfinite(a)):
                raise BoundaryError(f"{name} contains non-finite values")
            arrays[name] = a
        nseg = len(arrays["starts"])
        if nseg < 3 or any(len(a) != nseg for a in arrays.values()):
            raise BoundaryError("need at least 3 segments and equal-length data arrays")
        d = arrays["ends"] - arrays["starts"]
        lengths = np.hypot(d[:, 0], d[:, 1])
        if np.any(lengths == 0.0):
            raise BoundaryError("zero-length segment")
        scale = lengths.max()
        gap = np.abs(np.roll(arrays["starts"], -1, axis=0) - arrays["ends"]).max()
        if gap > _CLOSE_TOL * scale:
            raise BoundaryError(f"segments do not form a closed loop (gap {gap:.3e})")
        s, e = arrays["starts"], arrays["ends"]
        area = 0.5 * np.sum(s[:, 0] * e[:, 1] - e[:, 0] * s[:, 1])
        if area <= 0.0:
            raise BoundaryError("boundary must be oriented counterclockwise")
        normals = np.column_stack([d[:, 1], -d[:, 0]]) / lengths[:, None]
        for name, a in list(arrays.items()) + [("lengths", lengths), ("normals", normals)]:
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def n_segments(self) -> int:
        return len(self.starts)

    def distance(self, xi) -> float:
        """Shortest distance from ``xi`` to the polygon."""
        xi = np.asarray(xi, dtype=float)
        d = self.ends - self.starts
        t = np.clip(np.einsum("sk,sk->s", xi - self.starts, d) / self.lengths ** 2, 0.0, 1.0)
        closest = self.starts + t[:, None] * d
        return float(np.min(np.hypot(*(closest - xi).T)))

    def contains(self, xi) -> bool:
        """Even-odd point-in-polygon test."""
        x, y = np.asarray(xi, dtype=float)
        (x1, y1), (x2, y2) = self.starts.T, self.ends.T
        crosses = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        return bool(np.count_nonzero(crosses & (x < xc)) % 2)

    def quadrature(self, n: int = N_GAUSS):
        """Points, normals and weights (including ``L / 2``) of all segments,
        with the per-point segment index."""
        g, w = np.polynomial.legendre.leggauss(n)
        frac = 0.5 * (g + 1.0)
        d = self.ends - self.starts
        pts = self.starts[:, None, :] + frac[None, :, None] * d[:, None, :]
        wts = 0.5 * self.lengths[:, None] * w[None, :]
        seg = np.repeat(np.arange(self.n_segments), n)
        return (pts.reshape(-1, 2), np.repeat(self.normals, n, axis=0), wts.ravel(), seg)


def polygon_boundary(vertices, per_side: int, traction_fn, displacement_fn) -> BoundaryMesh:
    """Subdivide each polygon side into ``per_side`` segments and sample the
    boundary data at segment midpoints.

    ``traction_fn(x, n)`` and ``displacement_fn(x)`` take ``(nseg, 2)``
    arrays and return ``(nseg, 2)`` arrays.
    """
    v = np.asarray(vertices, dtype=float)
    a, b = v, np.roll(v, -1, axis=0)
    f = np.linspace(0.0, 1.0, per_side + 1)
    starts = (a[:, None, :] + f[None, :-1, None] * (b - a)[:, None, :]).reshape(-1, 2)
    ends = (a[:, None, :] + f[None, 1:, None] * (b - a)[:, None, :]).reshape(-1, 2)
    d = ends - starts
    normals = np.column_stack([d[:, 1], -d[:, 0]]) / np.hypot(d[:, 0], d[:, 1])[:, None]
    mid = 0.5 * (starts + ends)
    return BoundaryMesh(starts, ends, traction_fn(mid, normals), displacement_fn(mid))


def homogeneous_boundary(sigma_2d, material: IsotropicMaterial, vertices=None,
                         per_side: int = 20) -> BoundaryMesh:
    """Exact plane-strain data of a uniform in-plane stress ``sigma_2d`` (2x2).

    ``sigma_33 = nu (sigma_11 + sigma_22)``; the displacement is
    ``eps . x`` with no rigid part. ``vertices`` defaults to the unit square.
    """
    sig = np.asarray(sigma_2d, dtype=float)
    eps = plane_strain_strain(sig, material)[:2, :2]
    if vertices is None:
        vertices = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    return polygon_boundary(vertices, per_side, lambda x, n: n @ sig.T, lambda x: x @ eps.T)


def plane_strain_stress(sigma_2d, nu: float) -> np.ndarray:
    """3x3 stress of an in-plane state with the plane-strain ``sigma_33``."""
    out = np.zeros((3, 3))
    out[:2, :2] = sigma_2d
    out[2, 2] = nu * (out[0, 0] + out[1, 1])
    return out


def plane_strain_strain(sigma_2d, material: IsotropicMaterial) -> np.ndarray:
    sig = plane_strain_stress(sigma_2d, material.nu)
    return np.einsum("ijkl,kl->ij", compliance_tensor(material).array, sig)


@dataclass(frozen=True)
class KelvinKernels2D:
    """Plane-strain Kelvin kernels for interior stress, ``r = x - xi``.

    G_kij = [(1 - 2 nu)(d_ki r,j + d_kj r,i - d_ij r,k) + 2 r,i r,j r,k]
            / (4 pi (1 - nu) r)
    F_kij = mu / (2 pi (1 - nu) r**2) {2 dr/dn [(1 - 2 nu) d_ij r,k
            + nu (d_ik r,j + d_jk r,i) - 4 r,i r,j r,k]
            + 2 nu (n_i r,j r,k + n_j r,i r,k)
            + (1 - 2 nu)(2 n_k r,i r,j + n_j d_ik + n_i d_jk)
            - (1 - 4 nu) n_k d_ij}

    The ``33`` entry is ``nu (11 + 22)``; strain kernels are the compliance
    applied to the stress kernels over ``ij``.
    """

    material: IsotropicMaterial

    def evaluate(self, xi, x, n) -> KernelValues:
        nu, mu = self.material.nu, self.material.mu
        xi = np.asarray(xi, dtype=float)
        r_vec = np.asarray(x, dtype=float) - xi
        r = np.hypot(r_vec[:, 0], r_vec[:, 1])
        dr = r_vec / r[:, None]
        n = np.asarray(n, dtype=float)
        drdn = np.einsum("qk,qk->q", dr, n)
        d = np.eye(2)

        # 2D index form, axes (q, k, i, j)
        d_ki_rj = np.einsum("ki,qj->qkij", d, dr)
        d_kj_ri = np.einsum("kj,qi->qkij", d, dr)
        d_ij_rk = np.einsum("ij,qk->qkij", d, dr)
        rrr = np.einsum("qi,qj,qk->qkij", dr, dr, dr)
        G = ((1 - 2 * nu) * (d_ki_rj + d_kj_ri - d_ij_rk) + 2 * rrr) \
            / (4 * np.pi * (1 - nu) * r)[:, None, None, None]

        F = (2 * drdn[:, None, None, None] * ((1 - 2 * nu) * d_ij_rk
                                              + nu * (d_ki_rj + d_kj_ri) - 4 * rrr)
             + 2 * nu * (np.einsum("qi,qj,qk->qkij", n, dr, dr)
                         + np.einsum("qj,qi,qk->qkij", n, dr, dr))
             + (1 - 2 * nu) * (2 * np.einsum("qk,qi,qj->qkij", n, dr, dr)
                               + np.einsum("qj,ik->qkij", n, d)
                               + np.einsum("qi,jk->qkij", n, d))
             - (1 - 4 * nu) * np.einsum("qk,ij->qkij", n, d))
        F = F * (mu / (2 * np.pi * (1 - nu) * r ** 2))[:, None, None, None]

        G3, F3 = self._lift(G), self._lift(F)
        Dc = compliance_tensor(self.material).array
        return KernelValues(G3, F3,
                            np.einsum("ijmn,qkmn->qkij", Dc, G3),
                            np.einsum("ijmn,qkmn->qkij", Dc, F3))

    def _lift(self, K2: np.ndarray) -> np.ndarray:
        out = np.zeros(K2.shape[:2] + (3, 3))
        out[..., :2, :2] = K2
        out[..., 2, 2] = self.material.nu * (K2[..., 0, 0] + K2[..., 1, 1])
        return out


def kelvin_kernels_2d(material: IsotropicMaterial) -> KelvinKernels2D:
    if not (-1.0 < material.nu < 0.5 and material.mu > 0):
        raise ValueError("plane-strain Kelvin kernels need mu > 0 and -1 < nu < 0.5")
    return KelvinKernels2D(material)


@dataclass(frozen=True)
class ProjectedKernels:
    """Wraps a provider and premultiplies every kernel by a multiplier."""

    base: KernelProvider
    part: str

    def evaluate(self, xi, x, n) -> KernelValues:
        M = multiplier_rank4(self.part).array
        vals = self.base.evaluate(xi, x, n)
        return KernelValues(*(np.einsum("ijmn,qkmn->qkij", M, v) for v in vals))


def _floor(mesh: BoundaryMesh, min_distance: float | None) -> float:
    return DISTANCE_FACTOR * float(mesh.lengths.min()) if min_distance is None else min_distance


def _integrals(xi, mesh: BoundaryMesh, kernels: KernelProvider,
               min_distance: float | None):
    """Raw ``(stress, strain)`` boundary integrals as 3x3 arrays."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (2,) or not np.all(np.isfinite(xi)):
        raise ValueError(f"field point must be two finite coordinates, got {xi}")
    floor = _floor(mesh, min_distance)
    dist = mesh.distance(xi)
    if dist < floor:
        raise ProximityError(f"point {xi.tolist()} is {dist:.3e} from the boundary (floor {floor:.3e})")
    if not mesh.contains(xi):
        raise ProximityError(f"point {xi.tolist()} lies outside the boundary")
    x, n, w, seg = mesh.quadrature()
    vals = kernels.evaluate(xi, x, n)
    t = mesh.traction[seg]
    u = mesh.displacement[seg]
    sig = (np.einsum("q,qkij,qk->ij", w, vals.G_sigma, t)
           - np.einsum("q,qkij,qk->ij", w, vals.F_sigma, u))
    eps = (np.einsum("q,qkij,qk->ij", w, vals.G_eps, t)
           - np.einsum("q,qkij,qk->ij", w, vals.F_eps, u))
    return sig, eps


def _sym(a: np.ndarray, kind: str) -> SymTensor2:
    return SymTensor2.from_matrix(0.5 * (a + a.T), kind)


def interior_stress(xi, mesh: BoundaryMesh, kernels: KernelProvider,
                    min_distance: float | None = None) -> SymTensor2:
    """Stress at an interior point.

    Raises
    ------
    ProximityError
        ``xi`` is outside the domain or closer than ``min_distance``
        (default ``0.1`` times the shortest segment) to the boundary.
    """
    return _sym(_integrals(xi, mesh, kernels, min_distance)[0], STRESS)


def interior_strain(xi, mesh: BoundaryMesh, kernels: KernelProvider,
                    min_distance: float | None = None) -> SymTensor2:
    return _sym(_integrals(xi, mesh, kernels, min_distance)[1], STRAIN)


class StressSplit(NamedTuple):
    s: SymTensor2
    p: SymTensor2


class StrainSplit(NamedTuple):
    dev: SymTensor2
    mean: SymTensor2


def _project(a: np.ndarray, part: str) -> np.ndarray:
    return np.einsum("ijmn,mn->ij", multiplier_rank4(part).array, a)


def interior_stress_split(xi, mesh: BoundaryMesh, kernels: KernelProvider,
                          min_distance: float | None = None) -> StressSplit:
    """Multipliers applied to the assembled stress integral."""
    sig = _integrals(xi, mesh, kernels, min_distance)[0]
    return StressSplit(_sym(_project(sig, DEV), STRESS), _sym(_project(sig, VOL), STRESS))


def interior_strain_split(xi, mesh: BoundaryMesh, kernels: KernelProvider,
                          min_distance: float | None = None) -> StrainSplit:
    eps = _integrals(xi, mesh, kernels, min_distance)[1]
    return StrainSplit(_sym(_project(eps, DEV), STRAIN), _sym(_project(eps, VOL), STRAIN))


def read_boundary(path) -> BoundaryMesh:
    """``nsegs`` header, then ``x1 y1 x2 y2 t1 t2 u1 u2`` per segment."""
    lines = [ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise BoundaryError("empty boundary file")
    try:
        nseg = int(lines[0])
        rows = np.array([[float(v) for v in ln.split()] for ln in lines[1:]])
    except ValueError as exc:
        raise BoundaryError(f"malformed boundary file: {exc}") from exc
    if rows.shape != (nseg, 8):
        raise BoundaryError(f"expected {nseg} lines of 8 numbers, got shape {rows.shape}")
    return BoundaryMesh(rows[:, 0:2], rows[:, 2:4], rows[:, 4:6], rows[:, 6:8])


def write_boundary(mesh: BoundaryMesh, path) -> None:
    rows = np.hstack([mesh.starts, mesh.ends, mesh.traction, mesh.displacement])
    out = [str(mesh.n_segments)] + [" ".join(format(v, ".17g") for v in r) for r in rows]
    Path(path).write_text("\n".join(out) + "\n")


def read_points(path) -> np.ndarray:
    rows = []
    for ln in Path(path).read_text().splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"query line must hold 'x y', got {ln!r}")
        rows.append([float(v) for v in parts])
    return np.array(rows, dtype=float).reshape(-1, 2)


def evaluate_points(points, mesh: BoundaryMesh, kernels: KernelProvider,
                    min_distance: float | None = None) -> np.ndarray:
    """Rows matching :data:`RESULT_COLUMNS`; ``e12_dev`` is a tensor component."""
    out = []
    for xi in np.asarray(points, dtype=float).reshape(-1, 2):
        sig, eps = _integrals(xi, mesh, kernels, min_distance)
        s = _project(sig, DEV)
        e_dev = _project(eps, DEV)
        out.append([xi[0], xi[1], s[0, 0], s[1, 1], s[0, 1], np.trace(sig) / 3.0,
                    e_dev[0, 0], e_dev[1, 1], e_dev[0, 1], np.trace(eps) / 3.0])
    return np.array(out).reshape(-1, len(RESULT_COLUMNS))


def write_results(rows: np.ndarray, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in rows:
            w.writerow([format(float(v), ".17g") for v in r])
