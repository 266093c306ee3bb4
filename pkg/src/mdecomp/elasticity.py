"""Isotropic linear elasticity: stiffness/compliance tensors and their split."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from mdecomp.tensor_core import (
    DELTA,
    DEV,
    STRAIN,
    STRESS,
    VOL,
    Rank4,
    SymTensor2,
    apply_rank4,
    compose_rank4,
    multiplier_rank4,
    rank4_to_voigt,
)

STIFFNESS = "stiffness"
COMPLIANCE = "compliance"


class MaterialError(ValueError):
    """Material parameters outside the physically admissible range."""


@dataclass(frozen=True)
class IsotropicMaterial:
    """Isotropic elastic solid.

    Construct with :func:`material_from` (Young's modulus and Poisson's ratio)
    or :meth:`from_bulk_shear`; the remaining moduli are derived.
    """

    E: float
    nu: float
    lam: float
    mu: float
    K: float

    @classmethod
    def from_bulk_shear(cls, K: float, mu: float) -> "IsotropicMaterial":
        """Material with prescribed bulk and shear moduli.

        ``K`` and ``mu`` are stored exactly as given, so two materials sharing
        ``K`` yield bit-identical volumetric laws.
        """
        if not (K > 0 and mu > 0):
            raise MaterialError(f"bulk and shear moduli must be positive (K={K}, mu={mu})")
        E = 9.0 * K * mu / (3.0 * K + mu)
        nu = (3.0 * K - 2.0 * mu) / (2.0 * (3.0 * K + mu))
        return cls(E=E, nu=nu, lam=K - 2.0 * mu / 3.0, mu=mu, K=K)


def material_from(E: float, nu: float) -> IsotropicMaterial:
    """Isotropic material from Young's modulus and Poisson's ratio.

    Raises
    ------
    MaterialError
        If ``E <= 0`` or ``nu`` lies outside the open interval ``(-1, 0.5)``.
    """
    E = float(E)
    nu = float(nu)
    if not np.isfinite(E) or E <= 0.0:
        raise MaterialError(f"Young's modulus must be positive, got {E}")
    if not (-1.0 < nu < 0.5):
        raise MaterialError(f"Poisson's ratio must lie in (-1, 0.5), got {nu}")
    lam = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))
    mu = E / (2.0 * (1.0 + nu))
    K = lam + 2.0 * mu / 3.0
    return IsotropicMaterial(E=E, nu=nu, lam=lam, mu=mu, K=K)


@dataclass(frozen=True, eq=False)
class DecomposedLaw:
    """A stiffness or compliance tensor with its deviatoric/volumetric parts.

    Voigt images are cached on construction. For a stiffness they map
    engineering strain to stress, for a compliance stress to engineering
    strain.
    """

    full: Rank4
    dev: Rank4
    vol: Rank4
    role: str = STIFFNESS
    voigt_full: np.ndarray = field(init=False, repr=False)
    voigt_dev: np.ndarray = field(init=False, repr=False)
    voigt_vol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.role == STIFFNESS:
            kinds = (STRESS, STRAIN)
        elif self.role == COMPLIANCE:
            kinds = (STRAIN, STRESS)
        else:
            raise ValueError(f"role must be {STIFFNESS!r} or {COMPLIANCE!r}")
        for name in ("full", "dev", "vol"):
            v = rank4_to_voigt(getattr(self, name), *kinds)
            v.setflags(write=False)
            object.__setattr__(self, f"voigt_{name}", v)

    @property
    def output_kind(self) -> str:
        return STRESS if self.role == STIFFNESS else STRAIN

    def apply(self, t: SymTensor2, part: str = "full") -> SymTensor2:
        """Contract the full law (or its ``'dev'``/``'vol'`` part) with ``t``."""
        return apply_rank4(getattr(self, part), t, self.output_kind)

    def additivity_residual(self) -> float:
        """``max|full - dev - vol| / max|full|``."""
        r = self.full.array - self.dev.array - self.vol.array
        return float(np.abs(r).max() / np.abs(self.full.array).max())


def decompose_law(full: Rank4, role: str = STIFFNESS) -> DecomposedLaw:
    """Split an arbitrary rank-4 law by left composition with the multipliers."""
    dev = compose_rank4(multiplier_rank4(DEV), full)
    vol = compose_rank4(multiplier_rank4(VOL), full)
    return DecomposedLaw(full, dev, vol, role)


def _dd():
    d = DELTA
    ident = np.einsum("mi,nj->ijmn", d, d)
    spher = np.einsum("ij,mn->ijmn", d, d)
    return ident, spher


def stiffness_tensor(m: IsotropicMaterial) -> Rank4:
    """``C_ijkl = lam d_kl d_ij + 2 mu d_ki d_lj``."""
    ident, spher = _dd()
    return Rank4(m.lam * spher + 2.0 * m.mu * ident)


def compliance_tensor(m: IsotropicMaterial) -> Rank4:
    """``D_ijkl = ((1 + nu) d_ki d_lj - nu d_kl d_ij) / E``."""
    ident, spher = _dd()
    return Rank4(((1.0 + m.nu) * ident - m.nu * spher) / m.E)


def stiffness_dev_closed(m: IsotropicMaterial) -> Rank4:
    """``2/3 mu (3 d_mi d_nj - d_ij d_mn)``."""
    ident, spher = _dd()
    return Rank4(2.0 / 3.0 * m.mu * (3.0 * ident - spher))


def stiffness_vol_closed(m: IsotropicMaterial) -> Rank4:
    """``K d_ij d_mn``."""
    _, spher = _dd()
    return Rank4(m.K * spher)


def compliance_dev_closed(m: IsotropicMaterial) -> Rank4:
    """``(d_im d_jn - d_ij d_mn / 3) / (2 mu)``."""
    ident, spher = _dd()
    return Rank4((ident - spher / 3.0) / (2.0 * m.mu))


def compliance_vol_closed(m: IsotropicMaterial) -> Rank4:
    """``d_ij d_mn / (9 K)``.

    Contracted with stress this gives ``sigma_kk / (9 K) d_ij = eps_kk / 3 d_ij``
    since ``eps_kk = sigma_kk / (3 K)``; a coefficient ``1 / (3 K)`` would
    triple the mean strain and break ``D_dev + D_vol = D``.
    """
    _, spher = _dd()
    return Rank4(spher / (9.0 * m.K))


def _checked(composed: Rank4, closed: Rank4, full: Rank4, what: str) -> Rank4:
    # cancellation in the composition scales with the full law, not the part
    scale = np.abs(full.array).max()
    err = np.abs(composed.array - closed.array).max()
    if err > 1e-12 * scale:
        raise ArithmeticError(f"{what}: projector composition deviates from closed form ({err:.3e})")
    return closed


def constitutive_law(m: IsotropicMaterial) -> DecomposedLaw:
    """Isotropic stiffness with its deviatoric and volumetric parts.

    The parts are formed by composing the multipliers with the full
    stiffness and checked against the closed forms ``2 mu M_dev`` and
    ``K d_ij d_mn``. The closed forms are what gets stored: the volumetric
    part then depends on ``K`` alone, bit for bit.
    """
    split = decompose_law(stiffness_tensor(m))
    dev = _checked(split.dev, stiffness_dev_closed(m), split.full, "deviatoric stiffness")
    vol = _checked(split.vol, stiffness_vol_closed(m), split.full, "volumetric stiffness")
    return DecomposedLaw(split.full, dev, vol, STIFFNESS)


def compliance_law(m: IsotropicMaterial) -> DecomposedLaw:
    """Isotropic compliance with its deviatoric and volumetric parts."""
    if not (m.mu > 0 and m.K > 0):
        raise MaterialError("compliance requires positive shear and bulk moduli")
    split = decompose_law(compliance_tensor(m), COMPLIANCE)
    dev = _checked(split.dev, compliance_dev_closed(m), split.full, "deviatoric compliance")
    vol = _checked(split.vol, compliance_vol_closed(m), split.full, "volumetric compliance")
    return DecomposedLaw(split.full, dev, vol, COMPLIANCE)


class Roundtrip(NamedTuple):
    s: SymTensor2
    p: SymTensor2
    eps_dev: SymTensor2
    eps_mean: SymTensor2
    stress_residual: float
    strain_residual: float


def stress_strain_roundtrip(law_C: DecomposedLaw, law_D: DecomposedLaw,
                            eps: SymTensor2, sigma: SymTensor2 | None = None) -> Roundtrip:
    """Partial responses of both laws and their additivity residuals.

    ``s = C_dev eps``, ``p = C_vol eps``, ``eps_dev = D_dev sigma`` and
    ``eps_mean = D_vol sigma``; ``sigma`` defaults to ``C eps``. Residuals are
    ``|s + p - C eps|`` and ``|eps_dev + eps_mean - D sigma|`` relative to the
    norm of the full response.
    """
    eps = eps.with_kind(STRAIN)
    sig_full = law_C.apply(eps)
    sigma = sig_full if sigma is None else sigma.with_kind(STRESS)
    eps_full = law_D.apply(sigma)
    s = law_C.apply(eps, DEV)
    p = law_C.apply(eps, VOL)
    e_dev = law_D.apply(sigma, DEV)
    e_mean = law_D.apply(sigma, VOL)

    def rel(a, b):
        n = b.norm()
        return (a - b).norm() / n if n > 0 else (a - b).norm()

    return Roundtrip(s, p, e_dev, e_mean, rel(s + p, sig_full), rel(e_dev + e_mean, eps_full))
