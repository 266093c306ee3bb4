"""Deviatoric/volumetric decomposition of stress, strain and elastic laws.

Every split in this package is a left multiplication by one of two constant
projectors, ``M_dev`` and ``M_vol``, acting on symmetric tensors, on
constitutive/compliance tensors, on element stiffness integrands, and on
boundary-integral kernels alike.
"""
from mdecomp.tensor_core import (
    DEV,
    VOL,
    STRESS,
    STRAIN,
    Invariants,
    Rank4,
    SymTensor2,
    Voigt6,
    apply_rank4,
    compose_rank4,
    decompose,
    from_voigt,
    invariants,
    multiplier_rank4,
    multiplier_voigt,
    rank4_to_voigt,
    to_voigt,
)
from mdecomp.elasticity import (
    DecomposedLaw,
    IsotropicMaterial,
    compliance_law,
    constitutive_law,
    material_from,
)

__version__ = "0.1.0"

__all__ = [
    "DEV",
    "VOL",
    "STRESS",
    "STRAIN",
    "Invariants",
    "Rank4",
    "SymTensor2",
    "Voigt6",
    "apply_rank4",
    "compose_rank4",
    "decompose",
    "from_voigt",
    "invariants",
    "multiplier_rank4",
    "multiplier_voigt",
    "rank4_to_voigt",
    "to_voigt",
    "DecomposedLaw",
    "IsotropicMaterial",
    "compliance_law",
    "constitutive_law",
    "material_from",
]
