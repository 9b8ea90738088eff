import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from underlay_tas.quadrature import integrate
from underlay_tas.specfun import (
    E1_CROSSOVER,
    _e1_series,
    _gamma_cf_scaled,
    binomial,
    exp_integral_e1,
    exp_integral_e1_scaled,
    harmonic,
    hyp2f1_terminating,
    hyp3f2_terminating,
    hyp_terminating,
    upper_incomplete_gamma_nonpos,
)

# Frozen from 40-digit mpmath quadrature of the defining integrals.
E1_AT_1 = 0.219383934395520273677163775460121649031
GAMMA_M1_AT_1 = 0.1484955067759220479183599947013392184148
GAMMA_M3_AT_01 = 287.7360907483771821177057126857290035585
# a * int_0^1 u^(a-1) (1 - 0.9 u)^3 du with a = 1.5
HYP2F1_15_M3_25_09 = 0.1784285714285714285714285714285714285714
# 0.49 * int_0^inf x e^(-1.4 x) (1 - 0.6 e^(-2x))^3 dx
HYP3F2_WEIGHTED = 0.7596710905237979024568382091995670972572


class TestHyp2f1:
    def test_zero_degree_is_one(self):
        assert hyp2f1_terminating(3.7, 0, 4.7, 0.5) == 1.0

    def test_two_term_series(self):
        assert hyp2f1_terminating(2, -1, 3, 0.25) == pytest.approx(5 / 6, rel=1e-15)

    def test_against_frozen_quadrature(self):
        assert hyp2f1_terminating(1.5, -3, 2.5, 0.9) == pytest.approx(HYP2F1_15_M3_25_09, rel=1e-14)

    def test_against_live_quadrature(self):
        a, z = 1.5, 0.9
        q, _ = integrate(lambda u: a * u ** (a - 1) * (1 - z * u) ** 3, 0.0, 1.0, abs_tol=1e-14)
        assert hyp2f1_terminating(a, -3, a + 1, z) == pytest.approx(q, rel=1e-12)

    @pytest.mark.parametrize("b", [0.5, 1, 2.0, -1.5, math.nan])
    def test_non_terminating_rejected(self, b):
        with pytest.raises(ValueError):
            hyp2f1_terminating(1.0, b, 2.0, 0.5)

    def test_pole_rejected(self):
        with pytest.raises(ValueError, match="pole"):
            hyp2f1_terminating(1.0, -3, -2, 0.5)

    def test_pole_beyond_degree_is_fine(self):
        # c = -5 only vanishes at term m = 5 > d = 3
        assert math.isfinite(hyp2f1_terminating(1.0, -3, -5.0, 0.5))


class TestHyp3f2:
    def test_zero_degree(self):
        assert hyp3f2_terminating(0.3, 7.1, 0, 2.2, 9.0, 0.7) == 1.0

    def test_term_by_term(self):
        # exact Pochhammer products: 1 - 4/9 + 1/16
        expected = Fraction(1) - Fraction(4, 9) + Fraction(1, 16)
        assert expected == Fraction(89, 144)
        assert hyp3f2_terminating(2, 2, -2, 3, 3, 0.5) == pytest.approx(float(expected), rel=1e-15)

    def test_weighted_integral_pattern_frozen(self):
        r = 0.7
        assert hyp3f2_terminating(r, r, -3, r + 1, r + 1, 0.6) == pytest.approx(HYP3F2_WEIGHTED, rel=1e-13)

    def test_general_series_needs_terminating_parameter(self):
        with pytest.raises(ValueError):
            hyp_terminating((0.5, 1.5), (2.0,), 0.3)


ratio_st = st.floats(0.1, 8.0)
rate_st = st.floats(0.05, 10.0)
c_st = st.floats(0.0, 1.0)
d_st = st.integers(0, 8)


@settings(max_examples=40, deadline=None)
@given(ratio=ratio_st, b=rate_st, c=c_st, d=d_st)
def test_integral_identity_plain(ratio, b, c, d):
    a = ratio * b
    q, _ = integrate(lambda x: math.exp(-a * x) * (1 - c * math.exp(-b * x)) ** d, 0.0, math.inf,
                     abs_tol=0.0, rel_tol=1e-13)
    assert hyp2f1_terminating(ratio, -d, ratio + 1, c) / a == pytest.approx(q, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(ratio=ratio_st, b=rate_st, c=c_st, d=d_st)
def test_integral_identity_weighted(ratio, b, c, d):
    a = ratio * b
    q, _ = integrate(lambda x: x * math.exp(-a * x) * (1 - c * math.exp(-b * x)) ** d, 0.0, math.inf,
                     abs_tol=0.0, rel_tol=1e-13)
    closed = hyp3f2_terminating(ratio, ratio, -d, ratio + 1, ratio + 1, c) / a ** 2
    assert closed == pytest.approx(q, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(nu=st.floats(0.3, 4.0), mu=st.floats(1.0, 4.0), m=st.floats(0.2, 3.0),
       d=st.integers(0, 6), p=st.floats(0.5, 4.0), c=c_st)
def test_euler_integral_relation(nu, mu, m, d, p, c):
    # int_0^1 u^(nu-1) (1-u)^(mu-1) 2F1(m, -d; p; cu) du = B(mu, nu) 3F2(nu, m, -d; mu+nu, p; c)
    def f(u):
        return u ** (nu - 1) * (1 - u) ** (mu - 1) * hyp2f1_terminating(m, -d, p, c * u)

    q, _ = integrate(f, 0.0, 1.0, abs_tol=0.0, rel_tol=1e-12, max_intervals=20000)
    beta = math.exp(math.lgamma(mu) + math.lgamma(nu) - math.lgamma(mu + nu))
    closed = beta * hyp3f2_terminating(nu, m, -d, mu + nu, p, c)
    assert closed == pytest.approx(q, rel=1e-9, abs=1e-14)


class TestE1:
    def test_value_at_one(self):
        assert exp_integral_e1(1.0) == pytest.approx(E1_AT_1, rel=1e-14)

    def test_live_quadrature(self):
        q, _ = integrate(lambda t: math.exp(-t) / t, 1.0, math.inf, abs_tol=0.0, rel_tol=1e-14)
        assert exp_integral_e1(1.0) == pytest.approx(q, rel=1e-13)

    def test_bracketing_bounds(self):
        z = 10.0
        v = exp_integral_e1(z)
        assert math.exp(-z) / (z + 1) < v < math.exp(-z) / z

    @pytest.mark.parametrize("z", [0.1, 1.0, 5.0])
    def test_equals_gamma_zero(self, z):
        assert exp_integral_e1(z) == pytest.approx(upper_incomplete_gamma_nonpos(0, z), rel=1e-12)

    def test_branches_agree_at_crossover(self):
        z = E1_CROSSOVER
        series = _e1_series(z)
        cf = math.exp(-z) * _gamma_cf_scaled(0.0, z)
        assert series == pytest.approx(cf, rel=1e-12)

    @pytest.mark.parametrize("z", [1e-12, 1e-3, 0.5, 2.0, 20.0, 300.0])
    def test_against_scipy(self, z):
        sp = pytest.importorskip("scipy.special")
        assert exp_integral_e1(z) == pytest.approx(sp.exp1(z), rel=1e-13)

    def test_scaled_has_no_underflow(self):
        z = 1e4
        # e^z E1(z) ~ 1/z (1 - 1/z + 2/z^2)
        assert exp_integral_e1_scaled(z) == pytest.approx((1 - 1 / z + 2 / z ** 2) / z, rel=1e-11)

    @pytest.mark.parametrize("z", [0.0, -1.0])
    def test_non_positive_rejected(self, z):
        with pytest.raises(ValueError):
            exp_integral_e1(z)


class TestIncompleteGamma:
    def test_order_zero_is_e1(self):
        assert upper_incomplete_gamma_nonpos(0, 1.0) == pytest.approx(E1_AT_1, rel=1e-14)

    def test_order_minus_one(self):
        assert upper_incomplete_gamma_nonpos(-1, 1.0) == pytest.approx(GAMMA_M1_AT_1, rel=1e-12)

    def test_order_minus_three_small_z(self):
        assert upper_incomplete_gamma_nonpos(-3, 0.1) == pytest.approx(GAMMA_M3_AT_01, rel=1e-12)

    @pytest.mark.parametrize("order,z", [(-1, 1.0), (-3, 0.1), (-5, 2.5), (-7, 0.3), (-2, 8.0)])
    def test_live_quadrature(self, order, z):
        q, _ = integrate(lambda t: t ** (order - 1) * math.exp(-t), z, math.inf,
                         abs_tol=0.0, rel_tol=1e-14, breakpoints=(z + 1, z + 10))
        assert upper_incomplete_gamma_nonpos(order, z) == pytest.approx(q, rel=1e-12)

    @pytest.mark.parametrize("a", [-1, -2, -3, -4, -5, -6])
    @pytest.mark.parametrize("z", [0.1, 1.0, 10.0])
    def test_recurrence_identity(self, a, z):
        lhs = upper_incomplete_gamma_nonpos(a + 1, z)
        rhs = a * upper_incomplete_gamma_nonpos(a, z) + z ** a * math.exp(-z)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_quadrature_fallback_for_deep_orders(self):
        mp = pytest.importorskip("mpmath")
        z = 0.7
        assert upper_incomplete_gamma_nonpos(-10, z) == pytest.approx(float(mp.gammainc(-10, z)), rel=1e-11)

    @pytest.mark.parametrize("order,z", [(1, 1.0), (-1, 0.0), (-1, -2.0), (-1.5, 1.0)])
    def test_out_of_contract(self, order, z):
        with pytest.raises(ValueError):
            upper_incomplete_gamma_nonpos(order, z)


class TestHarmonicBinomial:
    def test_harmonic_small(self):
        assert harmonic(0) == 0.0
        assert harmonic(3) == pytest.approx(11 / 6, rel=1e-15)

    def test_harmonic_exact_rational(self):
        exact = sum(Fraction(1, i) for i in range(1, 101))
        assert harmonic(100) == float(exact)

    def test_harmonic_negative(self):
        with pytest.raises(ValueError):
            harmonic(-1)

    @pytest.mark.parametrize("n,k,expected", [(4, 2, 6.0), (8, 0, 1.0), (8, 9, 0.0), (5, -1, 0.0)])
    def test_binomial(self, n, k, expected):
        assert binomial(n, k) == expected

    def test_binomial_large(self):
        assert binomial(60, 30) == float(math.comb(60, 30))
