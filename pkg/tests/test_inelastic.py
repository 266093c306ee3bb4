import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import sym_tensors
from mdecomp.inelastic import YieldParams, perzyna_flow_rate, plastic_flow_rate, von_mises_yield
from mdecomp.tensor_core import STRESS, SymTensor2, decompose, invariants

sigma_y = st.floats(min_value=1e-2, max_value=1e3)


class TestYield:
    def test_uniaxial_at_yield(self):
        p = YieldParams(250.0)
        f = von_mises_yield(SymTensor2.diag(250.0, 0, 0), p)
        assert abs(f) <= 1e-12 * p.k2

    def test_zero_stress(self):
        p = YieldParams(250.0)
        assert von_mises_yield(SymTensor2.zeros(), p) == -p.k2

    def test_hydrostatic(self):
        p = YieldParams(250.0)
        assert von_mises_yield(SymTensor2.diag(40, 40, 40), p) == pytest.approx(-p.k2, rel=1e-15)

    def test_k(self):
        p = YieldParams(3.0)
        assert p.k == pytest.approx(math.sqrt(3.0))
        assert p.k2 == 3.0

    @pytest.mark.parametrize("kw", [dict(sigma_Y=0.0), dict(sigma_Y=1.0, eta=0.0), dict(sigma_Y=-2.0)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            YieldParams(**kw)

    @given(sym_tensors(STRESS), st.floats(-1e3, 1e3), sigma_y)
    def test_pressure_insensitive(self, t, q, sy):
        p = YieldParams(sy)
        shifted = t + SymTensor2.diag(q, q, q)
        scale = max(invariants(t).J2, p.k2)
        assert von_mises_yield(shifted, p) == pytest.approx(von_mises_yield(t, p), abs=1e-9 * scale)


class TestPlasticFlow:
    def test_uniaxial(self):
        out = plastic_flow_rate(SymTensor2.diag(300, 0, 0), YieldParams(1.0, lambda_dot=2.0))
        assert np.allclose(out.components, [400, -200, -200, 0, 0, 0], atol=1e-12)

    def test_hydrostatic(self):
        out = plastic_flow_rate(SymTensor2.diag(7, 7, 7), YieldParams(1.0, lambda_dot=2.0))
        assert not out.components.any()

    def test_zero_multiplier(self):
        out = plastic_flow_rate(SymTensor2.diag(300, 1, 0), YieldParams(1.0))
        assert not out.components.any()

    @given(sym_tensors(STRESS), st.floats(0, 10))
    def test_traceless(self, t, ld):
        out = plastic_flow_rate(t, YieldParams(1.0, lambda_dot=ld))
        assert abs(out.trace()) <= 1e-12 * max(np.abs(out.components).max(), 1e-300) or out.trace() == 0


class TestPerzyna:
    def test_inside_surface(self):
        p = YieldParams(250.0)
        out = perzyna_flow_rate(SymTensor2.diag(100, 0, 0), p)
        assert not out.components.any()

    def test_zero_stress(self):
        out = perzyna_flow_rate(SymTensor2.zeros(), YieldParams(1.0))
        assert not out.components.any()
        assert np.all(np.isfinite(out.components))

    def test_pure_shear(self):
        p = YieldParams(math.sqrt(3.0), eta=1.0)  # k = 1
        out = perzyna_flow_rate(SymTensor2([0, 0, 0, 2 * p.k, 0, 0]), p)
        assert out.components[3] == pytest.approx(p.k / 2, rel=1e-14)

    def test_on_surface_is_zero(self):
        p = YieldParams(250.0)
        assert not perzyna_flow_rate(SymTensor2.diag(250.0, 0, 0), p).components.any()

    @given(sym_tensors(STRESS), sigma_y, st.floats(1e-3, 1e3))
    def test_parallel_to_deviator_and_traceless(self, t, sy, eta):
        out = perzyna_flow_rate(t, YieldParams(sy, eta=eta))
        s = decompose(t).dev.matrix()
        r = out.matrix()
        scale = max(np.abs(r).max(), 1e-300)
        assert abs(np.trace(r)) <= 1e-12 * scale or np.trace(r) == 0
        if np.abs(r).max() > 0:
            c = np.sum(r * s) / np.sum(s * s)
            assert c >= 0
            assert np.abs(r - c * s).max() <= 1e-12 * scale
