"""Pointwise stress/strain decomposition and energy bookkeeping on FEM output."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mdecomp.elasticity import DecomposedLaw
from mdecomp.fem.element import FULL, IntegrationScheme, b_matrix, gauss_rule, shape_functions
from mdecomp.fem.mesh import Mesh
from mdecomp.tensor_core import VOIGT_PAIRS

_EYE = np.eye(3)


@dataclass(frozen=True, eq=False)
class FieldRecovery:
    """Fields at the full-rule Gauss points, arrays shaped ``(ne, nq, ...)``.

    Tensors are full 3x3 (plane strain has ``eps_33 = 0`` but, in general,
    ``sigma_33 != 0``). ``p`` and ``eps_mean`` are the scalar pressure and
    mean strain; ``u_dev = 1/2 s:eps_dev`` and ``u_vol = 1/2 p:eps_mean`` are
    energy densities. ``energy_*`` are domain integrals, the deviatoric one
    with the scheme's deviatoric rule and the volumetric one with its
    volumetric rule, so they match ``1/2 u.Kd.u`` and ``1/2 u.Kv.u``.
    """

    points: np.ndarray
    strain: np.ndarray
    stress: np.ndarray
    s: np.ndarray
    p: np.ndarray
    eps_dev: np.ndarray
    eps_mean: np.ndarray
    J2: np.ndarray
    u_dev: np.ndarray
    u_vol: np.ndarray
    energy_dev: float
    energy_vol: float

    @property
    def energy_total(self) -> float:
        return self.energy_dev + self.energy_vol


def _voigt_to_tensor(v: np.ndarray, dim: int) -> np.ndarray:
    """Engineering-shear Voigt strain ``(..., nv)`` to 3x3 tensors."""
    out = np.zeros(v.shape[:-1] + (3, 3))
    pairs = [(0, 0), (1, 1), (0, 1)] if dim == 2 else VOIGT_PAIRS
    for a, (i, j) in enumerate(pairs):
        if i == j:
            out[..., i, i] = v[..., a]
        else:
            out[..., i, j] = out[..., j, i] = 0.5 * v[..., a]
    return out


def _strains(coords: np.ndarray, ue: np.ndarray, order: int):
    """Strain tensors ``(ne, nq, 3, 3)`` and ``w * detJ`` ``(ne, nq)``."""
    dim = coords.shape[-1]
    pts, wts = gauss_rule(dim, order)
    eps, wdet = [], []
    for xi, w in zip(pts, wts):
        B, detJ = b_matrix(coords, xi)
        eps.append(_voigt_to_tensor(np.einsum("eak,ek->ea", B, ue), dim))
        wdet.append(w * detJ)
    return np.stack(eps, axis=1), np.stack(wdet, axis=1)


def _contract(T: np.ndarray, eps: np.ndarray) -> np.ndarray:
    return np.einsum("ijkl,...kl->...ij", T, eps)


def _dev_density(law: DecomposedLaw, eps: np.ndarray) -> np.ndarray:
    s = _contract(law.dev.array, eps)
    e_dev = eps - np.trace(eps, axis1=-2, axis2=-1)[..., None, None] / 3.0 * _EYE
    return 0.5 * np.einsum("...ij,...ij->...", s, e_dev)


def _vol_density(law: DecomposedLaw, eps: np.ndarray) -> np.ndarray:
    p = _contract(law.vol.array, eps)
    e_mean = np.trace(eps, axis1=-2, axis2=-1)[..., None, None] / 3.0 * _EYE
    return 0.5 * np.einsum("...ij,...ij->...", p, e_mean)


def recover_fields(mesh: Mesh, u: np.ndarray, law: DecomposedLaw,
                   scheme: IntegrationScheme = FULL) -> FieldRecovery:
    """Strain, stress and their splits at every full-rule Gauss point.

    ``sigma = C eps``, ``s = C_dev eps`` and the pressure tensor
    ``C_vol eps`` use the stored law parts; strain splits use the trace.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (mesh.n_dofs,):
        raise ValueError(f"displacement vector must have length {mesh.n_dofs}, got {u.shape}")
    coords = mesh.element_coords()
    dim = mesh.dim
    ue = u.reshape(-1, dim)[mesh.elements].reshape(mesh.n_elements, -1)

    eps, _ = _strains(coords, ue, 2)
    pts, _ = gauss_rule(dim, 2)
    N = np.array([shape_functions(dim, xi) for xi in pts])
    points = np.einsum("qn,end->eqd", N, coords)

    sigma = _contract(law.full.array, eps)
    s = _contract(law.dev.array, eps)
    p_tensor = _contract(law.vol.array, eps)
    eps_mean = np.trace(eps, axis1=-2, axis2=-1) / 3.0
    eps_dev = eps - eps_mean[..., None, None] * _EYE
    J2 = 0.5 * np.einsum("...ij,...ij->...", s, s)
    u_dev = 0.5 * np.einsum("...ij,...ij->...", s, eps_dev)
    u_vol = 0.5 * np.einsum("...ij,...ij->...", p_tensor, eps_mean[..., None, None] * _EYE)

    eps_d, wd = _strains(coords, ue, scheme.dev_order)
    eps_v, wv = _strains(coords, ue, scheme.vol_order)
    energy_dev = float(np.sum(wd * _dev_density(law, eps_d)))
    energy_vol = float(np.sum(wv * _vol_density(law, eps_v)))

    return FieldRecovery(points, eps, sigma, s, np.trace(p_tensor, axis1=-2, axis2=-1) / 3.0,
                         eps_dev, eps_mean, J2, u_dev, u_vol, energy_dev, energy_vol)
