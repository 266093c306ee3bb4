"""Global assembly of the decomposed stiffness, Dirichlet elimination, solve."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from mdecomp.elasticity import DecomposedLaw
from mdecomp.fem.element import FULL, IntegrationScheme, element_stiffness
from mdecomp.fem.mesh import Mesh

log = logging.getLogger(__name__)

#: free-dof count above which :func:`solve` switches to conjugate gradients
CG_THRESHOLD = 10_000
#: accepted normwise backward error when roundoff alone exceeds ``rtol``
BACKWARD_ERROR_TOL = 1e-13


class SolverError(RuntimeError):
    """The constrained system could not be solved to tolerance."""


class SingularSystemError(SolverError):
    """Constraints leave rigid-body modes (or other zero-energy modes) free."""


@dataclass
class BoundaryConditions:
    """Prescribed displacements and nodal forces keyed by ``(node, direction)``."""

    fixed: dict = field(default_factory=dict)
    loads: dict = field(default_factory=dict)

    def __post_init__(self):
        self.fixed = {(int(n), int(d)): float(v) for (n, d), v in self.fixed.items()}
        self.loads = {(int(n), int(d)): float(v) for (n, d), v in self.loads.items()}
        both = set(self.fixed) & set(self.loads)
        if both:
            raise ValueError(f"dofs both fixed and loaded: {sorted(both)[:5]}")

    def fix(self, nodes, direction: int, value: float = 0.0) -> "BoundaryConditions":
        for n in np.atleast_1d(nodes):
            self.fixed[(int(n), int(direction))] = float(value)
        return self

    def load(self, nodes, direction: int, value: float) -> "BoundaryConditions":
        """Add ``value`` to the force on every listed node."""
        for n in np.atleast_1d(nodes):
            key = (int(n), int(direction))
            if key in self.fixed:
                raise ValueError(f"dof {key} is already fixed")
            self.loads[key] = self.loads.get(key, 0.0) + float(value)
        return self


@dataclass
class GlobalSystem:
    """Unconstrained ``K = Kd + Kv`` plus constraint data; ``u`` after solve."""

    K: sp.csr_matrix
    Kd: sp.csr_matrix
    Kv: sp.csr_matrix
    f: np.ndarray
    free: np.ndarray
    fixed: np.ndarray
    fixed_values: np.ndarray
    mesh: Mesh
    u: np.ndarray | None = None

    @property
    def n_dofs(self) -> int:
        return self.K.shape[0]

    def reduced(self):
        """``(K_ff, f_f - K_fc u_c)`` after eliminating prescribed dofs."""
        K = self.K.tocsr()
        Kff = K[self.free][:, self.free]
        rhs = self.f[self.free] - K[self.free][:, self.fixed] @ self.fixed_values
        return Kff, rhs


def dof_index(node, direction, dim: int):
    return np.asarray(node) * dim + np.asarray(direction)


def _scatter(mesh: Mesh, ke: np.ndarray) -> sp.csr_matrix:
    dim = mesh.dim
    edofs = (mesh.elements[:, :, None] * dim + np.arange(dim)).reshape(mesh.n_elements, -1)
    nd = edofs.shape[1]
    rows = np.repeat(edofs, nd, axis=1).ravel()
    cols = np.tile(edofs, (1, nd)).ravel()
    return sp.coo_matrix((ke.ravel(), (rows, cols)), shape=(mesh.n_dofs,) * 2).tocsr()


def assemble_parts(mesh: Mesh, law: DecomposedLaw, scheme: IntegrationScheme = FULL):
    """Global ``(Kd, Kv)`` from all element deviatoric/volumetric matrices."""
    es = element_stiffness(mesh.element_coords(), law, scheme)
    return _scatter(mesh, es.Ke_dev), _scatter(mesh, es.Ke_vol)


def _constraints(mesh: Mesh, bcs: BoundaryConditions):
    dim = mesh.dim
    f = np.zeros(mesh.n_dofs)
    for (n, d), v in bcs.loads.items():
        f[dof_index(n, d, dim)] += v
    keys = sorted(bcs.fixed)
    fixed = np.array([dof_index(n, d, dim) for n, d in keys], dtype=np.int64)
    values = np.array([bcs.fixed[k] for k in keys], dtype=float)
    for n, d in list(bcs.fixed) + list(bcs.loads):
        if not (0 <= n < mesh.n_nodes and 0 <= d < dim):
            raise ValueError(f"boundary condition on nonexistent dof ({n}, {d})")
    free = np.setdiff1d(np.arange(mesh.n_dofs), fixed)
    return f, free, fixed, values


def assemble(mesh: Mesh, law: DecomposedLaw, scheme: IntegrationScheme = FULL,
             bcs: BoundaryConditions | None = None) -> GlobalSystem:
    """Assemble ``Kd`` and ``Kv`` separately and form ``K = Kd + Kv``."""
    bcs = bcs or BoundaryConditions()
    Kd, Kv = assemble_parts(mesh, law, scheme)
    f, free, fixed, values = _constraints(mesh, bcs)
    return GlobalSystem(Kd + Kv, Kd, Kv, f, free, fixed, values, mesh)


def reassemble_deviatoric(system: GlobalSystem, law: DecomposedLaw,
                          scheme: IntegrationScheme = FULL) -> GlobalSystem:
    """New system with ``Kd`` rebuilt from ``law`` and ``Kv`` carried over.

    Valid whenever ``law`` differs from the original one only in its
    deviatoric part, as during isochoric plastic flow.
    """
    Kd, _ = assemble_parts(system.mesh, law, scheme)
    return GlobalSystem(Kd + system.Kv, Kd, system.Kv, system.f.copy(),
                        system.free, system.fixed, system.fixed_values, system.mesh)


def rigid_body_modes(nodes: np.ndarray) -> np.ndarray:
    """Columns spanning translations and infinitesimal rotations."""
    n, dim = nodes.shape
    modes = []
    for d in range(dim):
        m = np.zeros((n, dim))
        m[:, d] = 1.0
        modes.append(m.ravel())
    c = nodes - nodes.mean(axis=0)
    planes = [(0, 1)] if dim == 2 else [(0, 1), (1, 2), (2, 0)]
    for i, j in planes:
        m = np.zeros((n, dim))
        m[:, i] = -c[:, j]
        m[:, j] = c[:, i]
        modes.append(m.ravel())
    return np.column_stack(modes)


def check_constraints(system: GlobalSystem) -> None:
    """Raise :class:`SingularSystemError` if a rigid motion leaves every
    prescribed dof untouched."""
    mesh = system.mesh
    R = rigid_body_modes(mesh.nodes)[system.fixed]
    nrb = 3 if mesh.dim == 2 else 6
    if R.size == 0 or np.linalg.matrix_rank(R) < nrb:
        raise SingularSystemError("constraints do not suppress all rigid-body modes")


def solve(system: GlobalSystem, *, rtol: float = 1e-10,
          cg_threshold: int = CG_THRESHOLD) -> np.ndarray:
    """Solve the constrained system; stores and returns the full ``u``.

    Direct sparse LU up to ``cg_threshold`` free dofs, Jacobi-preconditioned
    conjugate gradients above it.

    Raises
    ------
    SingularSystemError
        Rigid-body modes are not suppressed or the factorisation hits a zero
        pivot.
    SolverError
        Relative residual ``|K u - f| / |f|`` above ``rtol`` while the
        normwise backward error also exceeds :data:`BACKWARD_ERROR_TOL`
        (ill-conditioned systems, e.g. ``nu -> 0.5``, cannot reach ``rtol``
        in double precision), or no convergence.
    """
    check_constraints(system)
    Kff, rhs = system.reduced()
    u = np.zeros(system.n_dofs)
    u[system.fixed] = system.fixed_values
    bnorm = np.linalg.norm(rhs)
    if bnorm == 0.0:
        system.u = u
        return u
    if len(rhs) <= cg_threshold:
        try:
            lu = spla.splu(Kff.tocsc())
        except RuntimeError as exc:
            raise SingularSystemError(str(exc)) from exc
        uf = lu.solve(rhs)
        # iterative refinement for nearly incompressible (ill-conditioned) cases
        for _ in range(3):
            r = rhs - Kff @ uf
            if np.linalg.norm(r) <= 1e-2 * rtol * bnorm:
                break
            uf = uf + lu.solve(r)
    else:
        diag = Kff.diagonal()
        if np.any(diag <= 0):
            raise SolverError("non-positive diagonal: matrix is not SPD")
        M = sp.diags(1.0 / diag)
        uf, info = spla.cg(Kff, rhs, rtol=rtol * 1e-2, maxiter=20 * len(rhs), M=M)
        if info != 0:
            raise SolverError(f"conjugate gradients did not converge (info={info})")
    if not np.all(np.isfinite(uf)):
        raise SingularSystemError("solution is not finite")
    r = Kff @ uf - rhs
    res = np.linalg.norm(r) / bnorm
    # normwise backward error: what any double-precision u can reach at best
    berr = np.abs(r).max() / (abs(Kff).max() * np.abs(uf).max() + np.abs(rhs).max())
    log.debug("solved %d dofs, relative residual %.3e, backward error %.3e",
              len(rhs), res, berr)
    if res > rtol and berr > BACKWARD_ERROR_TOL:
        raise SolverError(f"relative residual {res:.3e} exceeds {rtol:.1e}")
    u[system.free] = uf
    system.u = u
    return u
