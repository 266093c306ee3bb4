"""Strain-energy density and its deviatoric/volumetric split."""
from __future__ import annotations

from typing import NamedTuple

from mdecomp.elasticity import DecomposedLaw
from mdecomp.tensor_core import (
    DEV,
    STRAIN,
    STRESS,
    VOL,
    SymTensor2,
    apply_rank4,
    double_contract,
    multiplier_rank4,
)


class EnergySplit(NamedTuple):
    """Energy densities and the two orthogonality residuals.

    ``total`` is ``1/2 sigma:eps`` computed directly, ``dev = 1/2 s:eps_dev``,
    ``vol = 1/2 p:eps_mean``, ``cross_sd = s:eps_mean``,
    ``cross_pd = p:eps_dev``. Up to roundoff
    ``total = dev + vol + (cross_sd + cross_pd) / 2``.
    """

    total: float
    dev: float
    vol: float
    cross_sd: float
    cross_pd: float


def _split(sigma: SymTensor2, eps: SymTensor2) -> EnergySplit:
    m_dev = multiplier_rank4(DEV)
    m_vol = multiplier_rank4(VOL)
    s = apply_rank4(m_dev, sigma)
    p = apply_rank4(m_vol, sigma)
    e_dev = apply_rank4(m_dev, eps)
    e_mean = apply_rank4(m_vol, eps)
    return EnergySplit(
        total=0.5 * double_contract(sigma, eps),
        dev=0.5 * double_contract(s, e_dev),
        vol=0.5 * double_contract(p, e_mean),
        cross_sd=double_contract(s, e_mean),
        cross_pd=double_contract(p, e_dev),
    )


def energy_split_from_strain(C: DecomposedLaw, eps: SymTensor2) -> EnergySplit:
    """Split of ``u = 1/2 C_ijkl eps_ij eps_kl`` for a stiffness law."""
    eps = eps.with_kind(STRAIN)
    return _split(C.apply(eps), eps)


def energy_split_from_stress(D: DecomposedLaw, sigma: SymTensor2) -> EnergySplit:
    """Same split reached from stress through ``eps = D sigma``."""
    sigma = sigma.with_kind(STRESS)
    return _split(sigma, D.apply(sigma))
