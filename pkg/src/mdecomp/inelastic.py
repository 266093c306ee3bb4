"""Point evaluations of the J2 yield function and the associated flow rates.

No return mapping or time stepping: these are the rate expressions only,
with the plastic multiplier rate supplied by the caller.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from mdecomp.tensor_core import STRAIN, SymTensor2, decompose, invariants


@dataclass(frozen=True)
class YieldParams:
    """Yield stress ``sigma_Y``, viscosity ``eta`` and plastic multiplier rate.

    The shear yield parameter ``k = sigma_Y / sqrt(3)`` is derived.
    """

    sigma_Y: float
    eta: float = 1.0
    lambda_dot: float = 0.0

    def __post_init__(self):
        if not self.sigma_Y > 0:
            raise ValueError(f"sigma_Y must be positive, got {self.sigma_Y}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")

    @property
    def k(self) -> float:
        return self.sigma_Y / math.sqrt(3.0)

    @property
    def k2(self) -> float:
        # sigma_Y**2 / 3 directly, without squaring a rounded square root
        return self.sigma_Y ** 2 / 3.0


def von_mises_yield(sigma: SymTensor2, p: YieldParams) -> float:
    """``f = J2 - k**2``; negative inside the elastic domain."""
    return invariants(sigma).J2 - p.k2


def plastic_flow_rate(sigma: SymTensor2, p: YieldParams) -> SymTensor2:
    """Associated plastic strain rate ``lambda_dot * s``."""
    s = decompose(sigma).dev
    return SymTensor2(p.lambda_dot * s.components, STRAIN)


def perzyna_flow_rate(sigma: SymTensor2, p: YieldParams) -> SymTensor2:
    """Viscoplastic strain rate ``<1 - k / sqrt(J2)> s / (2 eta)``.

    Returns exactly zero whenever ``J2 <= k**2``; the bracket is clipped
    before ``k / sqrt(J2)`` is formed, so ``J2 = 0`` never divides.
    """
    s = decompose(sigma).dev
    j2 = invariants(sigma).J2
    if j2 <= p.k2:
        return SymTensor2.zeros(STRAIN)
    factor = (1.0 - p.k / math.sqrt(j2)) / (2.0 * p.eta)
    return SymTensor2(factor * s.components, STRAIN)
