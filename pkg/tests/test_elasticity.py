import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from helpers import materials, random_material, random_tensor, rel
from mdecomp.elasticity import (
    COMPLIANCE,
    IsotropicMaterial,
    MaterialError,
    compliance_law,
    constitutive_law,
    decompose_law,
    material_from,
    stress_strain_roundtrip,
)
from mdecomp.tensor_core import (
    DEV,
    STRAIN,
    STRESS,
    VOIGT_PAIRS,
    VOL,
    Rank4,
    SymTensor2,
    apply_rank4,
    compose_rank4,
    multiplier_rank4,
)


class TestMaterial:
    def test_steel(self):
        m = material_from(210000, 0.3)
        assert m.mu == pytest.approx(80769.2308, abs=1e-4)
        assert m.lam == pytest.approx(121153.8462, abs=1e-4)
        assert m.K == pytest.approx(175000.0, rel=1e-14)

    def test_zero_poisson(self):
        m = material_from(3, 0)
        assert (m.lam, m.mu) == (0.0, 1.5)
        assert m.K == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("E, nu", [(1, 0.5), (1, 0.6), (1, -1.0), (0, 0.3), (-5, 0.2), (np.inf, 0.1)])
    def test_rejects(self, E, nu):
        with pytest.raises(MaterialError):
            material_from(E, nu)

    @given(materials)
    def test_conversions(self, m):
        lam, mu, K = oracles.lame(m.E, m.nu)
        assert m.lam == pytest.approx(lam, rel=1e-12, abs=1e-12 * m.E)
        assert m.mu == pytest.approx(mu, rel=1e-14)
        assert m.K == pytest.approx(K, rel=1e-12)

    def test_from_bulk_shear_roundtrip(self):
        m = IsotropicMaterial.from_bulk_shear(175000.0, 80769.23076923077)
        assert m.E == pytest.approx(210000, rel=1e-12)
        assert m.nu == pytest.approx(0.3, rel=1e-12)
        with pytest.raises(MaterialError):
            IsotropicMaterial.from_bulk_shear(-1.0, 1.0)


class TestConstitutiveLaw:
    def test_full_matches_loops(self):
        law = constitutive_law(material_from(210000, 0.3))
        assert rel(law.full.array, oracles.stiffness_loops(210000, 0.3)) <= 1e-15

    def test_vol_component(self):
        m = material_from(210000, 0.3)
        assert constitutive_law(m).vol[0, 0, 1, 1] == m.K

    def test_dev_components(self):
        m = material_from(210000, 0.3)
        law = constitutive_law(m)
        assert law.dev[0, 0, 0, 0] == pytest.approx(4 / 3 * m.mu, rel=1e-14)
        assert law.dev[0, 0, 1, 1] == pytest.approx(-2 / 3 * m.mu, rel=1e-14)

    def test_vol_kills_shear(self):
        law = constitutive_law(material_from(5.0, 0.25))
        out = law.apply(SymTensor2([0, 0, 0, 0.01, 0, 0], STRAIN), VOL)
        assert not out.components.any()

    def test_voigt_images(self):
        m = material_from(210000, 0.3)
        law = constitutive_law(m)
        assert law.voigt_full[0, 0] == pytest.approx(m.lam + 2 * m.mu, rel=1e-14)
        assert law.voigt_full[3, 3] == pytest.approx(m.mu, rel=1e-14)
        assert np.linalg.matrix_rank(law.voigt_dev) == 5
        assert np.linalg.matrix_rank(law.voigt_vol) == 1
        with pytest.raises(ValueError):
            law.voigt_full[0, 0] = 1.0

    def test_composition_matches_closed_forms(self, rng):
        for _ in range(20):
            m = random_material(rng)
            law = constitutive_law(m)
            split = decompose_law(law.full)
            scale = np.abs(law.full.array).max()
            assert np.abs(split.dev.array - law.dev.array).max() <= 1e-12 * scale
            assert np.abs(split.vol.array - law.vol.array).max() <= 1e-12 * scale

    @given(materials)
    def test_additivity(self, m):
        assert constitutive_law(m).additivity_residual() <= 1e-12
        assert compliance_law(m).additivity_residual() <= 1e-12

    @given(materials, st.lists(st.floats(-1, 1), min_size=6, max_size=6))
    def test_trace_law(self, m, c):
        eps = SymTensor2(c, STRAIN)
        sig = constitutive_law(m).apply(eps)
        scale = max(abs(3 * m.K * eps.trace()), 2 * m.mu * np.abs(c).max(), 1e-300)
        assert abs(sig.trace() - 3 * m.K * eps.trace()) <= 1e-11 * scale

    def test_vol_depends_on_bulk_modulus_only(self):
        a = constitutive_law(IsotropicMaterial.from_bulk_shear(7.0, 1.0))
        b = constitutive_law(IsotropicMaterial.from_bulk_shear(7.0, 3.5))
        assert np.array_equal(a.vol.array, b.vol.array)
        assert np.array_equal(a.voigt_vol, b.voigt_vol)


class TestComplianceLaw:
    def test_full_matches_loops(self):
        law = compliance_law(material_from(210000, 0.3))
        assert rel(law.full.array, oracles.compliance_loops(210000, 0.3)) <= 1e-15
        assert law.role == COMPLIANCE

    def test_vol_component_is_one_ninth_over_K(self):
        m = material_from(210000, 0.3)
        law = compliance_law(m)
        assert law.vol[0, 0, 0, 0] == pytest.approx(1 / (9 * m.K), rel=1e-14)

    def test_one_third_over_K_breaks_additivity(self):
        m = material_from(210000, 0.3)
        law = compliance_law(m)
        literal = np.einsum("ij,mn->ijmn", np.eye(3), np.eye(3)) / (3 * m.K)
        r = np.abs(law.full.array - law.dev.array - literal).max() / np.abs(law.full.array).max()
        assert r > 0.1

    def test_dev_component(self):
        m = material_from(210000, 0.3)
        assert compliance_law(m).dev[0, 1, 0, 1] == pytest.approx(1 / (2 * m.mu), rel=1e-14)

    def test_composition_matches_closed_forms(self, rng):
        for _ in range(20):
            m = random_material(rng)
            law = compliance_law(m)
            full = Rank4(oracles.compliance_loops(m.E, m.nu))
            scale = np.abs(full.array).max()
            dev = compose_rank4(multiplier_rank4(DEV), full)
            vol = compose_rank4(multiplier_rank4(VOL), full)
            assert np.abs(dev.array - law.dev.array).max() <= 1e-12 * scale
            assert np.abs(vol.array - law.vol.array).max() <= 1e-12 * scale

    def test_mutual_inverse(self, rng):
        for _ in range(50):
            m = random_material(rng)
            C, D = constitutive_law(m), compliance_law(m)
            t = random_tensor(rng, STRESS)
            back = C.apply(D.apply(t)).with_kind(STRESS)
            assert rel(back.components, t.components) <= 1e-10

    def test_maps_stress_to_strain(self):
        D = compliance_law(material_from(1.0, 0.2))
        assert D.apply(SymTensor2.diag(1, 0, 0)).kind == STRAIN

    def test_uniaxial_mean_strain(self):
        m = material_from(200.0, 0.25)
        eps_m = compliance_law(m).apply(SymTensor2.diag(9.0, 0, 0), VOL)
        assert np.allclose(eps_m.matrix(), 9.0 / (9 * m.K) * np.eye(3), rtol=1e-14, atol=0)


class TestRoundtrip:
    def test_hydrostatic_strain(self):
        m = material_from(100.0, 0.2)
        a = 1e-3
        r = stress_strain_roundtrip(constitutive_law(m), compliance_law(m),
                                    SymTensor2.diag(a, a, a, STRAIN))
        assert np.abs(r.s.components).max() <= 1e-12 * m.K * a
        assert np.allclose(r.p.matrix(), 3 * m.K * a * np.eye(3), rtol=1e-13)

    def test_pure_shear_strain(self):
        m = material_from(100.0, 0.2)
        r = stress_strain_roundtrip(constitutive_law(m), compliance_law(m),
                                    SymTensor2([0, 0, 0, 2e-3, 0, 0], STRAIN))
        assert not r.p.components.any()
        assert r.s.components[3] == pytest.approx(2 * m.mu * 2e-3, rel=1e-14)

    def test_uniaxial_stress(self):
        m = material_from(100.0, 0.2)
        r = stress_strain_roundtrip(constitutive_law(m), compliance_law(m),
                                    SymTensor2.zeros(STRAIN), SymTensor2.diag(6.0, 0, 0))
        assert np.allclose(r.eps_mean.matrix(), 6.0 / (9 * m.K) * np.eye(3), rtol=1e-14)

    def test_residuals_small(self, rng):
        for _ in range(50):
            m = random_material(rng)
            r = stress_strain_roundtrip(constitutive_law(m), compliance_law(m),
                                        random_tensor(rng, STRAIN, 1e-3))
            assert r.stress_residual <= 1e-12
            assert r.strain_residual <= 1e-12

    def test_generic_path_accepts_anisotropic(self, rng):
        a = rng.normal(size=(6, 6))
        # minor-symmetric tensor from a random 6x6 stiffness
        T = np.zeros((3, 3, 3, 3))
        for p, (i, j) in enumerate(VOIGT_PAIRS):
            for q, (k, l) in enumerate(VOIGT_PAIRS):
                for ii, jj in {(i, j), (j, i)}:
                    for kk, ll in {(k, l), (l, k)}:
                        T[ii, jj, kk, ll] = a[p, q]
        law = decompose_law(Rank4(T))
        assert law.additivity_residual() <= 1e-14
        t = random_tensor(rng, STRAIN)
        s = law.apply(t, DEV)
        assert abs(s.trace()) <= 1e-12 * s.norm()
        assert apply_rank4(law.vol, t).matrix()[0, 1] == 0
