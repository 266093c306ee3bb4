"""Isoparametric quad4 (plane strain) and hex8 kinematics and stiffness.

All routines are batched over elements: ``coords`` has shape
``(nelems, nen, dim)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from mdecomp.elasticity import DecomposedLaw
from mdecomp.fem.mesh import MeshError

# Voigt rows kept in 2D: plane strain drops 33, 23, 31
VOIGT_ROWS = {2: np.array([0, 1, 3]), 3: np.arange(6)}

_CORNERS = {
    2: np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]], dtype=float),
    3: np.array([[-1, -1, -1], [1, -1, -1], [1, 1, -1], [-1, 1, -1],
                 [-1, -1, 1], [1, -1, 1], [1, 1, 1], [-1, 1, 1]], dtype=float),
}


def gauss_rule(dim: int, order: int):
    """Tensor-product Gauss-Legendre rule on ``[-1, 1]**dim``.

    Returns points ``(order**dim, dim)`` and weights ``(order**dim,)``.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    pts = np.array(list(itertools.product(x, repeat=dim)))
    wts = np.array([np.prod(c) for c in itertools.product(w, repeat=dim)])
    return pts, wts


def shape_functions(dim: int, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    c = _CORNERS[dim]
    return np.prod(1.0 + c * xi, axis=1) / 2 ** dim


def shape_derivatives(dim: int, xi) -> np.ndarray:
    """``dN_a / dxi_k`` at one reference point, shape ``(nen, dim)``."""
    xi = np.asarray(xi, dtype=float)
    c = _CORNERS[dim]
    factors = 1.0 + c * xi
    out = np.empty_like(c)
    for k in range(dim):
        others = np.prod(np.delete(factors, k, axis=1), axis=1)
        out[:, k] = c[:, k] * others
    return out / 2 ** dim


def jacobians(coords: np.ndarray, xi) -> np.ndarray:
    """``J_kl = dx_k / dxi_l`` per element."""
    dN = shape_derivatives(coords.shape[-1], xi)
    return np.einsum("enk,nl->ekl", coords, dN)


def b_matrix(coords: np.ndarray, xi):
    """Strain-displacement matrices at reference point ``xi``.

    Parameters
    ----------
    coords : ndarray, shape (nelems, nen, dim) or (nen, dim)
    xi : array_like, shape (dim,)

    Returns
    -------
    B : ndarray, shape (nelems, nv, nen * dim)
        Maps element dofs ``(u1x, u1y, [u1z,] u2x, ...)`` to Voigt strain with
        engineering shear; ``nv = 3`` (11, 22, 12) in 2D, 6 in 3D. A 2D
        ``coords`` input drops the leading axis of every output.
    detJ : ndarray, shape (nelems,)

    Raises
    ------
    MeshError
        If any element has a non-positive Jacobian determinant at ``xi``.
    """
    coords = np.asarray(coords, dtype=float)
    single = coords.ndim == 2
    if single:
        coords = coords[None]
    ne, nen, dim = coords.shape
    J = jacobians(coords, xi)
    detJ = np.linalg.det(J)
    if np.any(detJ <= 0.0):
        raise MeshError(f"non-positive Jacobian in element {int(np.flatnonzero(detJ <= 0.0)[0])}")
    dN = shape_derivatives(dim, xi)
    # dN/dx = dN/dxi . J^-1
    dNdx = np.einsum("nl,elk->enk", dN, np.linalg.inv(J))
    if dim == 2:
        B = np.zeros((ne, 3, nen * 2))
        B[:, 0, 0::2] = dNdx[:, :, 0]
        B[:, 1, 1::2] = dNdx[:, :, 1]
        B[:, 2, 0::2] = dNdx[:, :, 1]
        B[:, 2, 1::2] = dNdx[:, :, 0]
    else:
        B = np.zeros((ne, 6, nen * 3))
        for a in range(3):
            B[:, a, a::3] = dNdx[:, :, a]
        # shear rows in (12, 23, 31) order
        for row, (i, j) in zip((3, 4, 5), ((0, 1), (1, 2), (2, 0))):
            B[:, row, i::3] = dNdx[:, :, j]
            B[:, row, j::3] = dNdx[:, :, i]
    if single:
        return B[0], detJ[0]
    return B, detJ


@dataclass(frozen=True)
class IntegrationScheme:
    """Gauss points per direction for the deviatoric and volumetric parts."""

    dev_order: int = 2
    vol_order: int = 2
    name: str = "custom"


FULL = IntegrationScheme(2, 2, "full")
VOL_REDUCED = IntegrationScheme(2, 1, "vol-reduced")
DEV_REDUCED = IntegrationScheme(1, 2, "dev-reduced")

SCHEMES = {s.name: s for s in (FULL, VOL_REDUCED, DEV_REDUCED)}


def scheme_named(name: str) -> IntegrationScheme:
    try:
        return SCHEMES[name]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; choose from {sorted(SCHEMES)}") from None


def restricted(law_voigt: np.ndarray, dim: int) -> np.ndarray:
    """6x6 stiffness restricted to the rows/columns present in ``dim``."""
    r = VOIGT_ROWS[dim]
    return np.asarray(law_voigt)[np.ix_(r, r)]


def integrate_btdb(coords: np.ndarray, D: np.ndarray, order: int) -> np.ndarray:
    """``sum_q w_q detJ_q B_q^T D B_q`` per element, shape ``(ne, ndof, ndof)``."""
    pts, wts = gauss_rule(coords.shape[-1], order)
    out = 0.0
    for xi, w in zip(pts, wts):
        B, detJ = b_matrix(coords, xi)
        out = out + (w * detJ)[:, None, None] * (B.transpose(0, 2, 1) @ (D @ B))
    return out


class ElementStiffness(NamedTuple):
    Ke: np.ndarray
    Ke_dev: np.ndarray
    Ke_vol: np.ndarray


def element_stiffness(coords: np.ndarray, law: DecomposedLaw,
                      scheme: IntegrationScheme = FULL) -> ElementStiffness:
    """Deviatoric and volumetric element stiffness, each with its own rule.

    ``Ke_dev`` integrates ``B^T C_dev B`` with ``scheme.dev_order`` points per
    direction, ``Ke_vol`` integrates ``B^T C_vol B`` with ``scheme.vol_order``;
    ``Ke = Ke_dev + Ke_vol``. Accepts one element ``(nen, dim)`` or a batch.
    """
    coords = np.asarray(coords, dtype=float)
    single = coords.ndim == 2
    if single:
        coords = coords[None]
    dim = coords.shape[-1]
    kd = integrate_btdb(coords, restricted(law.voigt_dev, dim), scheme.dev_order)
    kv = integrate_btdb(coords, restricted(law.voigt_vol, dim), scheme.vol_order)
    k = kd + kv
    if single:
        return ElementStiffness(k[0], kd[0], kv[0])
    return ElementStiffness(k, kd, kv)
