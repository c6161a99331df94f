import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from predtime.errors import ConfigurationError, DisturbanceBoundError, DomainError
from predtime.systems import (
    DisturbanceSignal,
    FixedTimeParams,
    PredefinedParams,
    SystemModel,
    circle_reference,
    fixnopred_rhs,
    fixnopred_settling_bound,
    pred_param_preset,
    pred_preset_settling_bound,
    pred_rhs,
    reduced_rhs,
    signed_pow_scalar,
    signed_pow_vector,
    tracking_disturbance,
    zero_disturbance,
)

finite = st.floats(-1e6, 1e6, allow_nan=False)
# away from the underflow range, where x * f(x) rounds to -0.0
nonzero = finite.filter(lambda x: abs(x) > 1e-100)


class TestSignedPow:
    def test_scalar_examples(self):
        assert signed_pow_scalar(-2.0, 2.0) == -4.0
        assert signed_pow_scalar(0.0, 0.5) == 0.0
        assert signed_pow_scalar(0.0, 0.0) == 0.0
        assert signed_pow_scalar(-3.0, 0.0) == -1.0

    def test_vector_examples(self):
        np.testing.assert_allclose(signed_pow_vector([3.0, 4.0], 1.0), [3.0, 4.0])
        np.testing.assert_allclose(signed_pow_vector([3.0, 4.0], 0.0), [0.6, 0.8])
        np.testing.assert_array_equal(signed_pow_vector([0.0, 0.0], 0.5), [0.0, 0.0])

    def test_negative_exponent_at_zero(self):
        with pytest.raises(DomainError):
            signed_pow_scalar(0.0, -1.0)
        with pytest.raises(DomainError):
            signed_pow_vector([0.0, 0.0], -0.5)

    @given(finite)
    def test_identity_exponent(self, x):
        assert signed_pow_scalar(x, 1.0) == pytest.approx(x)

    @given(finite, finite, st.floats(0.05, 3.0))
    def test_monotone(self, a, b, h):
        lo, hi = min(a, b), max(a, b)
        assert signed_pow_scalar(lo, h) <= signed_pow_scalar(hi, h)

    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=5), st.floats(0.0, 3.0))
    def test_vector_norm(self, xs, h):
        x = np.array(xs)
        n = np.linalg.norm(x)
        out = signed_pow_vector(x, h)
        expected = n ** h if n > 0 else 0.0
        assert np.linalg.norm(out) == pytest.approx(expected, rel=1e-12, abs=1e-300)


class TestFixNoPred:
    def test_rhs_examples(self):
        assert fixnopred_rhs(0.0, FixedTimeParams(1.0, 0.5)) == 0.0
        assert fixnopred_rhs(1.0, FixedTimeParams(1.0, 0.5)) == pytest.approx(-2.0)
        assert fixnopred_rhs(-1.0, FixedTimeParams(2.0, 0.5)) == pytest.approx(2.5)

    def test_settling_bound(self):
        assert fixnopred_settling_bound(FixedTimeParams(1.0, 0.5)) == pytest.approx(math.pi)
        assert fixnopred_settling_bound(FixedTimeParams(3.0, 0.9)) == pytest.approx(5 * math.pi)
        # infimum pi/2 as rho2 -> 0+, never attained
        for rho2 in (1e-3, 1e-6, 1e-9):
            b = fixnopred_settling_bound(FixedTimeParams(1.0, rho2))
            assert b > math.pi / 2
            assert b == pytest.approx(math.pi / 2, rel=2 * rho2)

    @pytest.mark.parametrize("rho1,rho2", [(0.0, 0.5), (-1.0, 0.5), (1.0, 0.0), (1.0, 1.0)])
    def test_constraints(self, rho1, rho2):
        with pytest.raises(ConfigurationError):
            FixedTimeParams(rho1, rho2)

    @given(nonzero, st.floats(0.1, 10.0), st.floats(0.05, 0.95))
    def test_odd_and_decreasing(self, x, rho1, rho2):
        p = FixedTimeParams(rho1, rho2)
        assert fixnopred_rhs(-x, p) == -fixnopred_rhs(x, p)
        assert x * fixnopred_rhs(x, p) < 0


class TestPred:
    def test_rhs_examples(self):
        p = PredefinedParams(1.0, 1.0, 1.0, 3.0, 0.5)
        assert pred_rhs(0.0, p) == 0.0
        assert pred_rhs(1.0, p) == pytest.approx(-math.sqrt(2.0))
        assert pred_rhs(-1.0, p) == pytest.approx(math.sqrt(2.0))

    def test_preset_values(self):
        # [DERIVED] Gamma(1/4)^4 / (4 pi) with Gamma(1/4) from the quadrature oracle
        g14 = 3.6256099082219083
        assert pred_param_preset(1.0).rho1 == pytest.approx(g14 ** 4 / (4 * math.pi), rel=1e-13)
        assert pred_param_preset(1.0).rho1 == pytest.approx(13.75037, abs=1e-5)
        assert pred_param_preset(2.0).rho1 == pytest.approx(pred_param_preset(1.0).rho1 / 4, rel=1e-14)
        p = pred_param_preset(0.7)
        assert (p.rho1 == p.rho2, p.rho3, p.rho4, p.rho5) == (True, 1.0, 3.0, 0.5)

    @pytest.mark.parametrize("tc", [0.1, 0.5, 1.0, 2.0, 37.0])
    def test_preset_bound_is_tc(self, tc):
        assert pred_preset_settling_bound(pred_param_preset(tc)) == pytest.approx(tc, rel=1e-10)

    def test_bound_only_for_preset_shape(self):
        with pytest.raises(ConfigurationError):
            pred_preset_settling_bound(PredefinedParams(1.0, 2.0, 1.0, 3.0, 0.5))

    def test_preset_rejects_bad_tc(self):
        with pytest.raises(ConfigurationError):
            pred_param_preset(0.0)

    @pytest.mark.parametrize("args", [
        (0.0, 1.0, 1.0, 3.0, 0.5),
        (1.0, 1.0, 2.0, 3.0, 0.5),   # rho5*rho3 = 1
        (1.0, 1.0, 1.0, 2.0, 0.5),   # rho5*rho4 = 1
        (1.0, 1.0, 1.0, 3.0, 0.0),
    ])
    def test_constraints(self, args):
        with pytest.raises(ConfigurationError):
            PredefinedParams(*args)

    @given(nonzero, st.floats(0.1, 100.0))
    def test_odd_and_decreasing(self, x, tc):
        p = pred_param_preset(tc)
        assert pred_rhs(-x, p) == -pred_rhs(x, p)
        assert x * pred_rhs(x, p) < 0


class TestSystemModel:
    def test_dispatch(self):
        m = SystemModel.fixnopred(FixedTimeParams(1.0, 0.5))
        assert m.rhs(1.0) == pytest.approx(-2.0)
        assert m.settling_bound() == pytest.approx(math.pi)
        m2 = SystemModel.pred(pred_param_preset(1.0))
        assert m2.settling_bound() == pytest.approx(1.0, rel=1e-10)

    def test_rejects_mismatch(self):
        with pytest.raises(ConfigurationError):
            SystemModel("pred", FixedTimeParams(1.0, 0.5))
        with pytest.raises(ConfigurationError):
            SystemModel("other", FixedTimeParams(1.0, 0.5))


class TestDisturbances:
    def test_reduced_rhs(self):
        np.testing.assert_array_equal(reduced_rhs([0.0, 0.0], [0.0, 0.0], zero_disturbance(2), None, 0.0), [0, 0])
        d = DisturbanceSignal(lambda x, t: np.array([0.0, 1.0]), 1.0)
        np.testing.assert_array_equal(reduced_rhs([0.0, 0.0], [1.0, 0.0], d, None, 0.0), [1.0, 1.0])

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            reduced_rhs([0.0, 0.0], [0.0], zero_disturbance(2), None, 0.0)
        with pytest.raises(DomainError):
            reduced_rhs([0.0, 0.0], [0.0, 0.0], zero_disturbance(3), None, 0.0)

    def test_bound_enforced(self):
        d = DisturbanceSignal(lambda x, t: np.array([2.0]), 1.0, name="too-big")
        with pytest.raises(DisturbanceBoundError, match="too-big"):
            d(None, 0.0)
        with pytest.raises(ConfigurationError):
            DisturbanceSignal(lambda x, t: 0.0, -1.0)

    def test_tracking_disturbance(self):
        d = tracking_disturbance()
        assert d.bound == pytest.approx(2 * math.pi)
        r, r_dot = circle_reference()
        for t in np.linspace(0.0, 2.0, 41):
            assert np.linalg.norm(d(None, t)) == pytest.approx(2 * math.pi, rel=1e-14)
            np.testing.assert_allclose(d(None, t), -r_dot(t))
            assert np.linalg.norm(r(t)) == pytest.approx(1.0)

    def test_reference_derivative(self):
        r, r_dot = circle_reference()
        h = 1e-6
        for t in (0.1, 0.37, 1.3):
            np.testing.assert_allclose((r(t + h) - r(t - h)) / (2 * h), r_dot(t), rtol=1e-8, atol=1e-8)
