import csv

import numpy as np
import pytest

from helpers import random_material
from mdecomp.elasticity import constitutive_law, material_from
from mdecomp.fem.assembly import BoundaryConditions, assemble, solve
from mdecomp.fem.element import DEV_REDUCED, FULL, VOL_REDUCED
from mdecomp.fem.io import results_columns, write_results
from mdecomp.fem.mesh import box_mesh, rectangle_mesh
from mdecomp.fem.recovery import recover_fields


def uniaxial_bar(nu=0.3, sigma=2.0, scheme=FULL):
    E, L = 50.0, 4.0
    mesh = rectangle_mesh(L, 1.0, 4, 2)
    x = mesh.nodes[:, 0]
    left = np.flatnonzero(x == 0)
    right = np.flatnonzero(np.isclose(x, L))
    w = np.array([0.25, 0.5, 0.25]) * sigma
    bcs = BoundaryConditions().fix(left, 0).fix(left[0], 1)
    for n, f in zip(right, w):
        bcs.load(n, 0, f)
    law = constitutive_law(material_from(E, nu))
    s = assemble(mesh, law, scheme, bcs)
    return mesh, law, s, solve(s)


def cantilever(scheme, dim=2):
    if dim == 2:
        mesh = rectangle_mesh(5.0, 1.0, 5, 2)
    else:
        mesh = box_mesh(4.0, 1.0, 1.0, 4, 1, 1)
    law = constitutive_law(material_from(100.0, 0.35))
    x = mesh.nodes[:, 0]
    root = np.flatnonzero(x == 0)
    tip = np.flatnonzero(np.isclose(x, x.max()))
    bcs = BoundaryConditions()
    for d in range(dim):
        bcs.fix(root, d)
    bcs.load(tip, 1, -0.1)
    s = assemble(mesh, law, scheme, bcs)
    return mesh, law, s, solve(s)


class TestUniaxial:
    @pytest.mark.parametrize("scheme", [FULL, VOL_REDUCED, DEV_REDUCED], ids=lambda s: s.name)
    def test_pressure_is_trace_over_three(self, scheme):
        nu, sigma = 0.3, 2.0
        mesh, law, _, u = uniaxial_bar(nu, sigma, scheme)
        f = recover_fields(mesh, u, law, scheme)
        # plane strain: sigma_33 = nu sigma_11
        assert np.allclose(f.stress[..., 0, 0], sigma, rtol=1e-10)
        assert np.allclose(f.stress[..., 2, 2], nu * sigma, rtol=1e-10)
        assert np.allclose(f.p, (sigma + nu * sigma) / 3, rtol=1e-10)
        assert np.allclose(f.strain[..., 2, 2], 0.0, atol=0)


class TestPureShear:
    def test_no_pressure(self, rng):
        mesh = rectangle_mesh(1, 1, 3, 3)
        m = random_material(rng)
        law = constitutive_law(m)
        g = 1e-3
        u = np.column_stack([g * mesh.nodes[:, 1], g * mesh.nodes[:, 0]]).ravel()
        f = recover_fields(mesh, u, law)
        assert np.abs(f.p).max() <= 1e-12 * m.mu * g
        assert np.allclose(f.s[..., 0, 1], 2 * m.mu * g, rtol=1e-12)


class TestPointwiseInvariants:
    def test_decomposition_identities(self, rng):
        mesh, law, _, u = cantilever(FULL)
        f = recover_fields(mesh, u, law)
        scale = np.abs(f.stress).max()
        p_tensor = f.p[..., None, None] * np.eye(3)
        assert np.abs(f.s + p_tensor - f.stress).max() <= 1e-12 * scale
        assert np.abs(np.trace(f.s, axis1=-2, axis2=-1)).max() <= 1e-12 * scale
        eps_scale = np.abs(f.strain).max()
        e_mean = f.eps_mean[..., None, None] * np.eye(3)
        assert np.abs(f.eps_dev + e_mean - f.strain).max() <= 1e-14 * eps_scale
        assert np.all(f.J2 >= 0)
        assert np.allclose(f.J2, 0.5 * np.einsum("...ij,...ij->...", f.s, f.s))
        assert np.all(f.u_dev >= 0) and np.all(f.u_vol >= 0)


class TestEnergy:
    @pytest.mark.parametrize("dim", [2, 3])
    @pytest.mark.parametrize("scheme", [FULL, VOL_REDUCED, DEV_REDUCED], ids=lambda s: s.name)
    def test_matches_quadratic_forms(self, scheme, dim):
        mesh, law, s, u = cantilever(scheme, dim)
        f = recover_fields(mesh, u, law, scheme)
        total = 0.5 * u @ (s.K @ u)
        dev = 0.5 * u @ (s.Kd @ u)
        vol = 0.5 * u @ (s.Kv @ u)
        assert abs(dev + vol - total) <= 1e-8 * total
        # per-part agreement measured against the total energy
        assert abs(f.energy_dev - dev) <= 1e-8 * total
        assert abs(f.energy_vol - vol) <= 1e-8 * total
        assert f.energy_total == pytest.approx(total, rel=1e-8)

    def test_full_rule_density_sum(self):
        mesh, law, s, u = cantilever(FULL)
        f = recover_fields(mesh, u, law)
        # 1 x 0.5 rectangles: unit weights, detJ = area / 4
        quad = 0.5 / 4 * np.sum(f.u_dev + f.u_vol)
        assert quad == pytest.approx(0.5 * u @ (s.K @ u), rel=1e-8)

    def test_wrong_length(self):
        mesh, law, _, u = cantilever(FULL)
        with pytest.raises(ValueError):
            recover_fields(mesh, u[:-1], law)


class TestResultsFile:
    def test_columns_and_rows(self, tmp_path):
        mesh, law, _, u = uniaxial_bar()
        f = recover_fields(mesh, u, law)
        path = tmp_path / "r.csv"
        write_results(f, path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == results_columns(2)
        assert rows[0] == ["elem", "gp", "x", "y", "s11", "s22", "s33", "s12", "s23", "s31",
                           "p", "J2", "u_dev", "u_vol"]
        assert len(rows) == 1 + 4 * mesh.n_elements
        assert float(rows[1][rows[0].index("p")]) == pytest.approx(f.p[0, 0], rel=1e-16)
        assert results_columns(3)[4] == "z"
