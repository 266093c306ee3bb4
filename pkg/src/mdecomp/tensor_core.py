"""Symmetric rank-2 / rank-4 tensor algebra and the decomposition multipliers.

Voigt convention used everywhere in the package: components are ordered
``(11, 22, 33, 12, 23, 31)``. Stress-kind vectors store tensor shear
(``sigma_12``), strain-kind vectors store engineering shear
(``gamma_12 = 2 eps_12``).

Rank-4 tensors are kept in the literal index form in which they are
written, e.g. the deviatoric multiplier is
``M_dev[i,j,k,l] = d[k,i] d[l,j] - d[l,k] d[i,j] / 3`` and is *not*
minor-symmetrised (``M_dev[0,1,0,1] == 1`` while ``M_dev[0,1,1,0] == 0``).
On symmetric arguments every such tensor acts exactly like its
minor-symmetrised counterpart, which is what the Voigt images and the
symmetry tag are built from.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

STRESS = "stress"
STRAIN = "strain"
DEV = "dev"
VOL = "vol"

MINOR_SYMMETRIC = "minor_symmetric"
GENERAL = "general"

_KINDS = (STRESS, STRAIN)

# (i, j) index pair of each Voigt slot
VOIGT_PAIRS = ((0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0))
VOIGT_LABELS = ("11", "22", "33", "12", "23", "31")
_SHEAR = np.array([False, False, False, True, True, True])

DELTA = np.eye(3)

_SYM_RTOL = 1e-12


def _check_kind(kind: str) -> str:
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    return kind


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymTensor2:
    """Symmetric second-order tensor stored as its six independent components.

    Parameters
    ----------
    components : array_like, shape (6,)
        ``(t11, t22, t33, t12, t23, t31)``; shear entries are tensor
        components for both kinds.
    kind : {'stress', 'strain'}
        Decides the shear convention of the Voigt image.
    """

    components: np.ndarray
    kind: str = STRESS

    def __post_init__(self):
        c = _frozen(self.components)
        if c.shape != (6,):
            raise ValueError(f"expected 6 components, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("tensor components must be finite")
        object.__setattr__(self, "components", c)
        _check_kind(self.kind)

    @classmethod
    def from_matrix(cls, a, kind: str = STRESS) -> "SymTensor2":
        """Build from a full 3x3 matrix, which must be symmetric to roundoff."""
        a = np.asarray(a, dtype=float)
        if a.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
        scale = np.abs(a).max()
        if np.abs(a - a.T).max() > _SYM_RTOL * scale:
            raise ValueError("matrix is not symmetric")
        a = 0.5 * (a + a.T)
        return cls([a[i, j] for i, j in VOIGT_PAIRS], kind)

    @classmethod
    def zeros(cls, kind: str = STRESS) -> "SymTensor2":
        return cls(np.zeros(6), kind)

    @classmethod
    def diag(cls, a, b, c, kind: str = STRESS) -> "SymTensor2":
        return cls([a, b, c, 0.0, 0.0, 0.0], kind)

    def matrix(self) -> np.ndarray:
        c = self.components
        return np.array([[c[0], c[3], c[5]],
                         [c[3], c[1], c[4]],
                         [c[5], c[4], c[2]]])

    def trace(self) -> float:
        c = self.components
        return float(c[0] + c[1] + c[2])

    def norm(self) -> float:
        """Frobenius norm of the full 3x3 matrix."""
        return float(np.sqrt(double_contract(self, self)))

    def with_kind(self, kind: str) -> "SymTensor2":
        return SymTensor2(self.components, kind)

    def __add__(self, other: "SymTensor2") -> "SymTensor2":
        return SymTensor2(self.components + other.components, self.kind)

    def __sub__(self, other: "SymTensor2") -> "SymTensor2":
        return SymTensor2(self.components - other.components, self.kind)

    def __neg__(self) -> "SymTensor2":
        return SymTensor2(-self.components, self.kind)

    def __mul__(self, factor: float) -> "SymTensor2":
        return SymTensor2(self.components * float(factor), self.kind)

    __rmul__ = __mul__

    def __repr__(self):
        body = ", ".join(f"{lab}={v:.6g}" for lab, v in zip(VOIGT_LABELS, self.components))
        return f"SymTensor2({self.kind}: {body})"


@dataclass(frozen=True, eq=False)
class Rank4:
    """Fourth-order tensor ``T[i, j, k, l]``.

    ``symmetry`` is derived on construction: ``'minor_symmetric'`` when the
    tensor maps symmetric tensors to symmetric tensors, i.e. when its
    minor-symmetrised form (see :meth:`canonical`) has
    ``T_ijkl = T_jikl = T_ijlk``; ``'general'`` otherwise.
    """

    array: np.ndarray
    symmetry: str = field(init=False)

    def __post_init__(self):
        a = _frozen(self.array)
        if a.shape != (3, 3, 3, 3):
            raise ValueError(f"expected shape (3, 3, 3, 3), got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("tensor components must be finite")
        object.__setattr__(self, "array", a)
        right = 0.5 * (a + a.transpose(0, 1, 3, 2))
        scale = max(np.abs(a).max(), np.finfo(float).tiny)
        asym = np.abs(right - right.transpose(1, 0, 2, 3)).max()
        tag = MINOR_SYMMETRIC if asym <= _SYM_RTOL * scale else GENERAL
        object.__setattr__(self, "symmetry", tag)

    def canonical(self) -> "Rank4":
        """Minor-symmetrised tensor with the same action on symmetric tensors."""
        a = self.array
        s = 0.25 * (a + a.transpose(1, 0, 2, 3) + a.transpose(0, 1, 3, 2)
                    + a.transpose(1, 0, 3, 2))
        return Rank4(s)

    def __getitem__(self, idx):
        return self.array[idx]

    def __add__(self, other: "Rank4") -> "Rank4":
        return Rank4(self.array + other.array)

    def __sub__(self, other: "Rank4") -> "Rank4":
        return Rank4(self.array - other.array)

    def __mul__(self, factor: float) -> "Rank4":
        return Rank4(self.array * float(factor))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class Voigt6:
    """Six-vector image of a symmetric tensor in the package Voigt order."""

    values: np.ndarray
    kind: str = STRESS

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (6,):
            raise ValueError(f"expected 6 entries, got shape {v.shape}")
        object.__setattr__(self, "values", v)
        _check_kind(self.kind)


class Invariants(NamedTuple):
    I1: float
    J2: float
    J3: float


class Decomposition(NamedTuple):
    dev: SymTensor2
    vol: SymTensor2
    scalar: float


# -- multipliers --------------------------------------------------------------

def multiplier_rank4(kind: str) -> Rank4:
    """Deviatoric or volumetric decomposition multiplier in tensor form.

    ``dev``: ``d_ki d_lj - 1/3 d_lk d_ij``; ``vol``: ``1/3 d_lk d_ij``.
    Entries are integer multiples of ``1/3`` evaluated as ``n / 3.0`` so that
    they coincide bit-for-bit with :func:`multiplier_voigt`.
    """
    d = DELTA
    ident = np.einsum("ki,lj->ijkl", d, d)
    spher = np.einsum("lk,ij->ijkl", d, d)
    if kind == DEV:
        coef = 3.0 * ident - spher
    elif kind == VOL:
        coef = spher
    else:
        raise ValueError(f"kind must be 'dev' or 'vol', got {kind!r}")
    return Rank4(coef / 3.0)


def multiplier_voigt(kind: str) -> np.ndarray:
    """6x6 matrix form of the multiplier (same matrix for stress and strain)."""
    m = np.zeros((6, 6))
    if kind == DEV:
        m[:3, :3] = 3.0 * np.eye(3) - 1.0
        m[3:, 3:] = 3.0 * np.eye(3)
    elif kind == VOL:
        m[:3, :3] = 1.0
    else:
        raise ValueError(f"kind must be 'dev' or 'vol', got {kind!r}")
    return m / 3.0


def identity_rank4() -> Rank4:
    """``d_ki d_lj``: maps every second-order tensor onto itself."""
    return Rank4(np.einsum("ki,lj->ijkl", DELTA, DELTA))


# -- contractions -------------------------------------------------------------

def apply_rank4(T: Rank4, t: SymTensor2, kind: str | None = None) -> SymTensor2:
    """``result_ij = T_ijkl t_kl``; the result kind defaults to the input kind."""
    out = np.einsum("ijkl,kl->ij", T.array, t.matrix())
    return SymTensor2.from_matrix(out, kind or t.kind)


def compose_rank4(A: Rank4, B: Rank4) -> Rank4:
    """``result_ijmn = A_ijkl B_klmn``."""
    return Rank4(np.einsum("ijkl,klmn->ijmn", A.array, B.array))


def double_contract(a: SymTensor2, b: SymTensor2) -> float:
    """``a_ij b_ij`` over all nine index pairs."""
    return float(np.sum(a.matrix() * b.matrix()))


# -- Voigt bridge -------------------------------------------------------------

def _shear_factor(kind: str) -> np.ndarray:
    return np.where(_SHEAR, 2.0 if kind == STRAIN else 1.0, 1.0)


def to_voigt(t: SymTensor2) -> Voigt6:
    return Voigt6(t.components * _shear_factor(t.kind), t.kind)


def from_voigt(v: Voigt6) -> SymTensor2:
    return SymTensor2(v.values / _shear_factor(v.kind), v.kind)


def rank4_to_voigt(T: Rank4, row_kind: str, col_kind: str) -> np.ndarray:
    """6x6 image ``V`` of ``T`` with ``to_voigt(T t) = V @ to_voigt(t)``.

    The row kind is the kind of the result, the column kind that of the
    argument (e.g. ``strain -> stress`` for a stiffness: ``row_kind='stress'``,
    ``col_kind='strain'``).

    Raises
    ------
    ValueError
        If ``T`` is tagged ``'general'``: its action on symmetric tensors
        produces non-symmetric results, so no Voigt image exists.
    """
    _check_kind(row_kind)
    _check_kind(col_kind)
    if T.symmetry != MINOR_SYMMETRIC:
        raise ValueError("rank-4 tensor has no Voigt image (not minor symmetric)")
    a = T.array
    right = 0.5 * (a + a.transpose(0, 1, 3, 2))
    rows = np.array([i for i, _ in VOIGT_PAIRS]), np.array([j for _, j in VOIGT_PAIRS])
    block = right[rows[0][:, None], rows[1][:, None], rows[0][None, :], rows[1][None, :]]
    # a shear slot of the argument collects both t_kl and t_lk
    col = np.where(_SHEAR, 1.0 if col_kind == STRAIN else 2.0, 1.0)
    row = _shear_factor(row_kind)
    return row[:, None] * block * col[None, :]


def solve_voigt(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``A x = b`` for a 6x6 Voigt matrix, refusing singular ``A``.

    Raises
    ------
    numpy.linalg.LinAlgError
        When ``A`` is rank deficient, e.g. a decomposition multiplier or a
        decomposed constitutive matrix.
    """
    A = np.asarray(A, dtype=float)
    rank = np.linalg.matrix_rank(A)
    if rank < A.shape[0]:
        raise np.linalg.LinAlgError(f"matrix is singular (rank {rank} < {A.shape[0]})")
    return np.linalg.solve(A, b)


# -- split and invariants -----------------------------------------------------

def decompose(t: SymTensor2) -> Decomposition:
    """Split ``t`` into its deviatoric part and its spherical part.

    ``scalar`` is the mean value ``trace(t) / 3`` (pressure for stress, mean
    strain for strain) and ``vol = scalar * I``.
    """
    scalar = t.trace() / 3.0
    vol = SymTensor2([scalar, scalar, scalar, 0.0, 0.0, 0.0], t.kind)
    return Decomposition(t - vol, vol, scalar)


def invariants(t: SymTensor2) -> Invariants:
    """First invariant and the second/third deviatoric invariants of ``t``."""
    s = decompose(t).dev.matrix()
    j2 = 0.5 * np.sum(s * s)
    j3 = np.einsum("ij,jk,ki->", s, s, s) / 3.0
    return Invariants(t.trace(), float(j2), float(j3))
