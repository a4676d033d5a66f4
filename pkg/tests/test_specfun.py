import math
import random

import mpmath
import pytest
from hypothesis import given, strategies as st

from owc_relay.errors import DomainError
from owc_relay.quadrature import quad
from owc_relay.specfun import (EvalOptions, erf, exp_integral_en, gamma_fn, log_gamma,
                               lower_gamma_scaled, upper_incomplete_gamma)


def maclaurin_erf(x, terms=10):
    # 2/sqrt(pi) sum (-1)^n x^(2n+1) / (n! (2n+1))
    return 2 / math.sqrt(math.pi) * sum((-1) ** n * x ** (2 * n + 1) / (math.factorial(n) * (2 * n + 1))
                                        for n in range(terms))


class TestGamma:
    def test_factorial(self):
        assert gamma_fn(5) == pytest.approx(24, rel=1e-12)
        assert gamma_fn(1) == pytest.approx(1, rel=1e-12)

    def test_half_integer(self):
        assert gamma_fn(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            gamma_fn(x)

    @given(st.floats(1e-3, 150))
    def test_against_mpmath(self, x):
        assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)
        assert log_gamma(x) == pytest.approx(float(mpmath.loggamma(x)), rel=1e-12, abs=1e-13)


class TestUpperIncompleteGamma:
    @given(st.floats(-30, 50))
    def test_shape_one_is_exponential(self, x):
        assert upper_incomplete_gamma(1, x) == pytest.approx(math.exp(-x), rel=1e-14)

    def test_k2_finite_series(self):
        assert upper_incomplete_gamma(2, 0.5) == pytest.approx(math.exp(-0.5) * 1.5, rel=1e-14)
        assert upper_incomplete_gamma(2, 0.5) == pytest.approx(0.9097960, abs=5e-8)

    def test_negative_argument_continuation(self):
        assert upper_incomplete_gamma(2, -1.0) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("a", [1, 2, 3, 5, 8])
    def test_integer_shape_matches_series(self, a):
        for x in (-3.0, -0.2, 0.0, 0.7, 4.0, 25.0):
            series = math.factorial(a - 1) * math.exp(-x) * sum(x ** n / math.factorial(n) for n in range(a))
            assert upper_incomplete_gamma(a, x) == pytest.approx(series, rel=1e-13, abs=1e-300)

    def test_noninteger_negative_argument_rejected(self):
        with pytest.raises(DomainError):
            upper_incomplete_gamma(2.5, -0.1)

    @given(st.floats(1e-3, 30))
    def test_zero_argument_is_complete_gamma(self, a):
        assert upper_incomplete_gamma(a, 0.0) == pytest.approx(gamma_fn(a), rel=1e-12)

    @given(st.floats(1e-2, 10), st.floats(0, 20))
    def test_recurrence(self, a, x):
        lhs = upper_incomplete_gamma(a + 1, x)
        rhs = a * upper_incomplete_gamma(a, x) + x ** a * math.exp(-x)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    @given(st.floats(-4, 12), st.floats(1e-3, 60))
    def test_against_mpmath(self, a, x):
        ref = float(mpmath.gammainc(a, x))
        assert upper_incomplete_gamma(a, x) == pytest.approx(ref, rel=1e-10, abs=1e-300)


class TestExpIntegral:
    @given(st.floats(1e-3, 50))
    def test_order_zero(self, r):
        assert exp_integral_en(0, r) == pytest.approx(math.exp(-r) / r, rel=1e-13)

    def test_order_one_at_one(self):
        # brute-force quadrature oracle of int_1^inf e^{-t}/t dt
        assert exp_integral_en(1, 1.0) == pytest.approx(0.2193839, abs=5e-8)
        assert exp_integral_en(1, 1.0) == pytest.approx(float(mpmath.e1(1)), rel=1e-12)

    def test_reduction_to_incomplete_gamma(self):
        k, x = 2.7, 0.9
        mpmath.mp.dps = 30
        lhs = mpmath.quad(lambda t: mpmath.exp(-x * t) * t ** (k - 2), [1, mpmath.inf])
        rhs = x ** (1 - k) * mpmath.quad(lambda t: t ** (k - 2) * mpmath.exp(-t), [x, mpmath.inf])
        assert float(lhs) == pytest.approx(float(rhs), rel=1e-12)
        assert exp_integral_en(2 - k, x) == pytest.approx(float(rhs), rel=1e-9)
        assert exp_integral_en(2 - k, x) == pytest.approx(x ** (1 - k) * upper_incomplete_gamma(k - 1, x),
                                                          rel=1e-12)

    def test_zero_argument(self):
        assert exp_integral_en(3.0, 0.0) == pytest.approx(0.5)
        with pytest.raises(DomainError):
            exp_integral_en(1.0, 0.0)
        with pytest.raises(DomainError):
            exp_integral_en(2.0, -1.0)

    @given(st.floats(-3, 5), st.floats(1e-3, 30), st.floats(1e-3, 5))
    def test_decreasing_in_argument(self, a, r, dr):
        assert exp_integral_en(a, r + dr) < exp_integral_en(a, r)


def test_defining_integrals_on_random_inputs():
    rng = random.Random(7)
    for _ in range(100):
        a, x = rng.uniform(0.2, 8), rng.uniform(0.0, 25)
        ref = quad(lambda t: math.exp((a - 1) * math.log(t) - t), x, math.inf, rel_tol=1e-12,
                   endpoint_singularity="none").value if x > 0 else gamma_fn(a)
        assert upper_incomplete_gamma(a, x) == pytest.approx(ref, rel=1e-8)
        n, r = rng.uniform(-3, 5), rng.uniform(0.05, 20)
        ref = quad(lambda t: math.exp(-r * t - n * math.log(t)), 1.0, math.inf, rel_tol=1e-12).value
        assert exp_integral_en(n, r) == pytest.approx(ref, rel=1e-8)
        y = rng.uniform(-4, 4)
        ref = 2 / math.sqrt(math.pi) * quad(lambda t: math.exp(-t * t), 0.0, abs(y) or 1e-300,
                                            rel_tol=1e-12).value * math.copysign(1, y)
        assert erf(y) == pytest.approx(ref, rel=1e-8, abs=1e-300)


class TestErf:
    def test_zero_and_limit(self):
        assert erf(0.0) == 0.0
        assert erf(6.0) == pytest.approx(1.0, abs=1e-15)

    def test_small_argument_series(self):
        assert erf(0.10027) == pytest.approx(maclaurin_erf(0.10027), rel=1e-12)
        assert erf(0.10027) == pytest.approx(0.1127645, abs=1e-7)

    @given(st.floats(-5, 5))
    def test_odd(self, x):
        assert erf(-x) == -erf(x)

    @given(st.floats(-1, 1))
    def test_against_series(self, x):
        assert erf(x) == pytest.approx(maclaurin_erf(x, 25), rel=1e-12, abs=1e-300)


class TestLowerGammaScaled:
    @given(st.sampled_from([0.6, 1.0, 1.3, 2.0, 2.7, 3.0, 4.5]), st.floats(-8, 8), st.floats(1e-3, 40),
           st.floats(0, 10))
    def test_against_mpmath(self, k, m, l, scale):
        if scale + m <= 0:
            scale = -m + 0.1
        mpmath.mp.dps = 40
        ref = mpmath.exp(-scale * l) * mpmath.quad(lambda y: y ** (k - 1) * mpmath.exp(-m * y), [0, l])
        assert lower_gamma_scaled(k, m, l, scale) == pytest.approx(float(ref), rel=1e-11, abs=1e-300)

    def test_domain(self):
        with pytest.raises(DomainError):
            lower_gamma_scaled(0.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            lower_gamma_scaled(2.0, 1.0, -1.0)


def test_eval_options_validation():
    EvalOptions(rel_tol=1e-3, max_terms=50)
    with pytest.raises(DomainError):
        EvalOptions(rel_tol=1e-2)
    with pytest.raises(DomainError):
        EvalOptions(max_terms=49)
