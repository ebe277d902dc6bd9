import math

import numpy as np
import pytest

from wydskew.errors import DomainError, NumericalError, ValidationError
from wydskew.generators import (
    FALLBACK_RADIUS,
    SAMPLE_GRID,
    builtin_bridge,
    builtin_exotic,
    builtin_power,
    construct_f,
    derivative_at_one,
    functions_equal,
    g_auxiliary,
    generator,
    limit_at_zero,
    sharp,
    star,
    symmetry_class,
    tilde,
    with_metadata,
)

P_GRID = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
ARITH = generator(lambda t: (1 + t) / 2, "arith")


def exotic_direct(t):
    return (t / (1 + t)) ** (1 + t) * (1 + t) ** (1 + 1 / t)


class TestTransforms:
    def test_sharp_power(self):
        assert sharp(builtin_power(0.3))(2.0) == pytest.approx(2 ** 0.7, rel=1e-14)
        assert 2 ** 0.7 == pytest.approx(1.6245, abs=1e-4)

    def test_sharp_arithmetic_mean(self):
        assert sharp(ARITH)(3.0) == pytest.approx(1.5)

    @pytest.mark.parametrize("h", [builtin_power(0.3), ARITH, builtin_exotic(), builtin_bridge(0.2)])
    def test_involutions(self, h):
        assert functions_equal(sharp(sharp(h)), h, rtol=1e-12)
        assert functions_equal(star(star(h)), h, rtol=1e-12)
        assert functions_equal(tilde(tilde(h)), h, rtol=1e-12)

    def test_star_examples(self):
        assert functions_equal(star(ARITH), ARITH, rtol=1e-15)
        ident = generator(lambda t: t, "id")
        np.testing.assert_allclose(star(ident)(SAMPLE_GRID), 1.0, rtol=1e-15)

    def test_tilde_examples(self):
        assert functions_equal(tilde(builtin_power(0.37)), builtin_power(0.37), rtol=1e-14)
        # 1 / ((1 + 1/t)/2) = 2t/(1+t)
        np.testing.assert_allclose(tilde(ARITH)(SAMPLE_GRID), 2 * SAMPLE_GRID / (1 + SAMPLE_GRID), rtol=1e-14)

    def test_sharp_of_vanishing_function(self):
        h = generator(lambda t: np.where(t > 100, 0.0, 1.0), "step")
        with pytest.raises(DomainError):
            sharp(h)


class TestDerivativeAndLimit:
    def test_power_rule(self):
        assert derivative_at_one(builtin_power(0.3)) == 0.3
        bare = generator(lambda t: t ** 0.3)
        assert derivative_at_one(bare) == pytest.approx(0.3, abs=1e-9)

    def test_exotic_derivative(self):
        # d/dt log h = ln t + (1+t)/t - (1 + 1/t^2) ln(1+t) + (1/t - t)/(1+t); at t=1: 2 - 2 ln 2
        expected = 2 - 2 * math.log(2)
        assert expected == pytest.approx(0.61371, abs=1e-5)
        assert derivative_at_one(builtin_exotic()) == pytest.approx(expected, rel=1e-15)
        bare = with_metadata(builtin_exotic(), analytic_derivative_at_one=None)
        assert derivative_at_one(bare) == pytest.approx(expected, abs=1e-9)

    def test_linear(self):
        assert derivative_at_one(ARITH) == pytest.approx(0.5, abs=1e-10)

    def test_unstable_derivative(self):
        kink = generator(lambda t: 1 + np.sign(t - 1) * np.abs(t - 1) ** 0.5, "cusp")
        with pytest.raises(NumericalError):
            derivative_at_one(kink)

    def test_limit_constructed_wy(self):
        assert limit_at_zero(construct_f(builtin_power(0.5)).base) == pytest.approx(0.25)

    def test_limit_numeric(self):
        assert limit_at_zero(ARITH) == pytest.approx(0.5, abs=1e-7)

    def test_limit_divergent(self):
        assert limit_at_zero(builtin_power(-0.5)) == math.inf
        assert limit_at_zero(generator(lambda t: t ** -2.0)) == math.inf

    def test_limit_nonconvergent(self):
        with pytest.raises(NumericalError):
            limit_at_zero(generator(lambda t: 2 + np.sin(1 / t)))

    def test_exotic_limits(self):
        h = builtin_exotic()
        assert h(1e-8) < 1e-7
        # t / h(t) -> 1/e
        assert 1e-9 / h(1e-9) == pytest.approx(math.exp(-1), rel=1e-6)


class TestBuiltins:
    def test_power_values(self):
        assert builtin_power(0.5)(4.0) == 2.0
        assert builtin_power(1.5)(4.0) == 8.0

    @pytest.mark.parametrize("p", [1.0, 0.0, -1.0, 2.0, 3.0])
    def test_power_rejects(self, p):
        with pytest.raises(ValidationError):
            builtin_power(p)

    def test_bridge_values(self):
        assert builtin_bridge(0.0)(3.0) == pytest.approx(2.0)
        assert functions_equal(builtin_bridge(0.5), builtin_power(0.5), rtol=1e-15)
        assert builtin_bridge(1.0)(3.0) == pytest.approx(1.5)

    @pytest.mark.parametrize("a", [0.0, 0.2, 0.5, 0.8, 1.0])
    def test_bridge_sharp_is_reflection(self, a):
        assert functions_equal(sharp(builtin_bridge(a)), builtin_bridge(1 - a), rtol=1e-12)

    def test_bridge_range(self):
        with pytest.raises(ValidationError):
            builtin_bridge(1.1)

    def test_exotic_values(self):
        h = builtin_exotic()
        assert h(1.0) == 1.0
        assert h(2.0) == pytest.approx((2 / 3) ** 3 * 3 ** 1.5, rel=1e-14)
        assert h(2.0) == pytest.approx(1.53960, abs=1e-5)
        assert h(0.5) == pytest.approx(1 / 1.5396007178390019, rel=1e-14)
        assert h(0.5) == pytest.approx(0.64952, abs=1e-5)

    def test_exotic_matches_direct_formula(self):
        t = np.logspace(-2, 2, 41)
        np.testing.assert_allclose(builtin_exotic()(t), exotic_direct(t), rtol=1e-12)

    def test_exotic_domain(self):
        with pytest.raises(DomainError):
            builtin_exotic()(-1.0)


def wyd_closed_form(p, t):
    return p * (1 - p) * (t - 1) ** 2 / ((t ** p - 1) * (t ** (1 - p) - 1))


class TestConstructF:
    def test_wigner_yanase(self):
        m = construct_f(builtin_power(0.5))
        np.testing.assert_allclose(m(SAMPLE_GRID), 0.25 * (np.sqrt(SAMPLE_GRID) + 1) ** 2, rtol=1e-12)
        assert m(4.0) == pytest.approx(2.25)
        assert m.metric_constant == 0.25
        assert m.regular

    @pytest.mark.parametrize("p", P_GRID)
    def test_power_closed_form(self, p):
        m = construct_f(builtin_power(p))
        np.testing.assert_allclose(m(SAMPLE_GRID), wyd_closed_form(p, SAMPLE_GRID), rtol=1e-10)

    def test_arithmetic_mean(self):
        # (h-1)(h#-1) = (t-1)^2 / (2(1+t)) and the prefactor is 1/4
        m = construct_f(ARITH)
        np.testing.assert_allclose(m(SAMPLE_GRID), (1 + SAMPLE_GRID) / 2, rtol=1e-9)
        assert limit_at_zero(m.base) == pytest.approx(0.5, abs=1e-7)
        assert construct_f(builtin_bridge(0.0)).metric_constant == 0.5

    def test_convex_power_normalised(self):
        m = construct_f(builtin_power(1.5))
        assert m.normalization == pytest.approx(-0.75)
        vals = m(SAMPLE_GRID)
        assert np.all(vals > 0)
        assert m.metric_constant == 0.0
        assert not m.regular
        np.testing.assert_allclose(vals, wyd_closed_form(1.5, SAMPLE_GRID), rtol=1e-10)

    def test_convex_power_raw_is_negative(self):
        raw = construct_f(builtin_power(1.5), normalize=False)
        assert np.all(raw(SAMPLE_GRID) < 0)
        assert not raw.normalized

    @pytest.mark.parametrize("h", [builtin_power(0.3), builtin_bridge(0.2), builtin_exotic(), builtin_power(1.5)])
    def test_symmetric_in_h_and_sharp(self, h):
        a = construct_f(h)(SAMPLE_GRID)
        b = construct_f(sharp(h))(SAMPLE_GRID)
        np.testing.assert_allclose(a, b, rtol=1e-10)

    @pytest.mark.parametrize("h", [builtin_power(0.3), builtin_exotic(), ARITH, builtin_power(-0.5)])
    def test_value_at_one(self, h):
        m = construct_f(h)
        assert m(1.0) == pytest.approx(1.0, abs=1e-12)
        assert m(np.array([1.0]))[0] == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("h", [builtin_power(0.3), builtin_power(0.5), builtin_exotic(),
                                   builtin_bridge(0.25), builtin_power(1.5)])
    def test_fallback_boundary_continuity(self, h):
        m = construct_f(h)
        slope = 0.5  # f'(1) = 1/2 for a symmetric normalised f
        for sign in (1.0, -1.0):
            inner = 1 + sign * 9e-5
            outer = 1 + sign * 1.1e-4
            jump = (m(outer) - m(inner)) - slope * (outer - inner)
            assert abs(jump) < 1e-6
            edge = 1 + sign * FALLBACK_RADIUS
            just_in = m(np.nextafter(edge, 1.0))
            just_out = m(np.nextafter(edge, 1.0 + 2 * sign))
            assert abs(just_in - just_out) < 1e-10

    def test_rejects_identity_and_constant(self):
        with pytest.raises(ValidationError, match="identity"):
            construct_f(generator(lambda t: t, "id"))
        with pytest.raises(ValidationError, match="constant"):
            construct_f(generator(lambda t: np.ones_like(t), "one"))

    def test_rejects_unnormalised(self):
        with pytest.raises(ValidationError, match="normalised"):
            construct_f(generator(lambda t: 2 * t ** 0.5))

    def test_denominator_zero_away_from_one(self):
        h = generator(lambda t: 1 + (t - 1) * (t - 2) / 10, "bump")
        m = construct_f(h)
        with pytest.raises(DomainError, match="vanishes at t=2.0"):
            m(2.0)


class TestGAuxiliary:
    def test_sqrt(self):
        g = g_auxiliary(builtin_power(0.5))
        # (sqrt t - 1)/(t - 1) twice = 2/(sqrt t + 1)
        assert g(4.0) == pytest.approx(2 / 3, rel=1e-14)
        np.testing.assert_allclose(g(SAMPLE_GRID), 2 / (np.sqrt(SAMPLE_GRID) + 1), rtol=1e-10)

    @pytest.mark.parametrize("h", [builtin_power(0.3), builtin_exotic(), ARITH, builtin_power(1.5)])
    def test_value_at_one(self, h):
        assert g_auxiliary(h)(1.0) == pytest.approx(1.0, abs=1e-12)

    def test_identity_with_raw_f(self):
        h = builtin_power(0.3)
        g = g_auxiliary(h)
        raw = construct_f(h, normalize=False)
        for t in (0.5, 2.0, 10.0):
            assert -(t - 1) / (g(t) - 1) == pytest.approx(raw(t), rel=1e-10)


class TestSymmetryClass:
    def test_power(self):
        rep = symmetry_class(builtin_power(0.3))
        assert rep.tilde_symmetric and not rep.star_symmetric and rep.f_symmetric
        assert rep.f_symmetric_verified

    def test_exotic(self):
        rep = symmetry_class(builtin_exotic())
        assert rep.tilde_symmetric and rep.f_symmetric and rep.f_symmetric_verified

    def test_arithmetic_mean(self):
        # t h(1/t) = (t + 1)/2
        rep = symmetry_class(ARITH)
        assert rep.star_symmetric and rep.f_symmetric

    def test_asymmetric_generator(self):
        h = generator(lambda t: t ** 0.3 * ((1 + t) / 2) ** 0.2, "skewed")
        rep = symmetry_class(h)
        assert not rep.star_symmetric and not rep.tilde_symmetric
        assert rep.f_symmetric_verified in (False, None)
        assert rep.f_symmetric is False

    @pytest.mark.parametrize("h", [builtin_power(p) for p in P_GRID]
                             + [builtin_bridge(a) for a in (0.0, 0.25, 0.5, 0.75, 1.0)] + [builtin_exotic()])
    def test_constructed_f_symmetric(self, h):
        f = construct_f(h)
        assert symmetry_class(h).f_symmetric
        a, b = f(SAMPLE_GRID), star(f.base)(SAMPLE_GRID)
        np.testing.assert_allclose(a, b, rtol=1e-9)


class TestDerivativeIdentity:
    @pytest.mark.parametrize("h", [builtin_power(p) for p in P_GRID]
                             + [builtin_bridge(a) for a in (0.0, 0.25, 0.5, 0.75, 1.0)] + [builtin_exotic()])
    def test_sum_is_one(self, h):
        bare = with_metadata(h, analytic_derivative_at_one=None)
        d, ds = derivative_at_one(bare), derivative_at_one(sharp(bare))
        assert d + ds == pytest.approx(1.0, abs=1e-6)
        assert 0 < d < 1
