"""Special functions and the semi-infinite integrator.

Expected values for the error functions are recomputed inside the tests from
independent quadratures of their defining integrals, not from the wrapped
implementations.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad
from scipy.special import dawsn

from udwtomo import numerics
from udwtomo.errors import ConvergenceError, InsufficientDataError, OverflowRangeError


def test_erf_examples():
    assert numerics.erf(0.0) == 0.0
    # oracle: adaptive quadrature of the defining integral
    oracle, err = quad(lambda t: 2.0 / math.sqrt(math.pi) * math.exp(-t * t), 0.0, 1.0,
                       epsabs=1e-15)
    assert err < 1e-14
    assert numerics.erf(1.0) == pytest.approx(oracle, rel=1e-14)
    assert numerics.erf(-1.0) == -numerics.erf(1.0)


def test_erf_tail_accuracy():
    for x in (2.0, 4.0, 6.0):
        oracle, _ = quad(lambda t: 2.0 / math.sqrt(math.pi) * math.exp(-t * t), 0.0, x,
                         epsabs=1e-16)
        assert numerics.erf(x) == pytest.approx(oracle, rel=1e-14)


def test_erfi_examples():
    assert numerics.erfi(0.0) == 0.0
    for x in (1.0, 3.0):
        oracle, err = quad(lambda t: 2.0 / math.sqrt(math.pi) * math.exp(t * t), 0.0, x,
                           epsabs=1e-13, epsrel=1e-13)
        assert numerics.erfi(x) == pytest.approx(oracle, rel=1e-12)
    assert numerics.erfi(1.0) == pytest.approx(1.6504257587975429, rel=1e-12)


def test_erfi_full_admissible_range():
    # independent high-precision oracle across the whole admissible range
    import mpmath as mp
    mp.mp.dps = 40
    for x in (0.5, 2.0, 5.0, 10.0, 15.0, 20.0, 25.0, 26.0):
        want = float(mp.erfi(x))
        assert numerics.erfi(x) == pytest.approx(want, rel=1e-12)


def test_erfi_range_guard():
    with pytest.raises(OverflowRangeError):
        numerics.erfi(27.0)
    numerics.erfi(26.0)  # boundary admissible


def test_erfi_scaled():
    assert numerics.erfi_scaled(0.0) == 0.0
    assert numerics.erfi_scaled(1.0) == pytest.approx(
        math.exp(-1.0) * numerics.erfi(1.0), rel=1e-13)
    # 3-term asymptotic series oracle at large argument
    x = 30.0
    asym = (1.0 + 1.0 / (2 * x * x) + 3.0 / (4 * x**4)) / (x * math.sqrt(math.pi))
    assert numerics.erfi_scaled(x) == pytest.approx(asym, rel=1e-3)
    with pytest.raises(ValueError):
        numerics.erfi_scaled(-1.0)


@given(st.floats(min_value=-6.0, max_value=6.0, allow_nan=False))
def test_erf_odd(x):
    assert numerics.erf(x) + numerics.erf(-x) == pytest.approx(0.0, abs=1e-15)


@given(st.floats(min_value=-10.0, max_value=10.0, allow_nan=False))
def test_erfi_odd(x):
    assert numerics.erfi(x) + numerics.erfi(-x) == pytest.approx(0.0, abs=1e-300)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 5.0])
def test_erfi_scaled_consistent_with_erfi(x):
    assert numerics.erfi_scaled(x) * math.exp(x * x) == pytest.approx(
        numerics.erfi(x), rel=1e-10)


class TestIntegrateSemiInfinite:
    def test_gaussian(self):
        res = numerics.integrate_semi_infinite(lambda k: math.exp(-k * k), 1e-12,
                                               decay_scale=1.0)
        assert res.value == pytest.approx(math.sqrt(math.pi) / 2.0, abs=1e-12)
        assert res.error_estimate <= 1e-12
        assert res.evaluations >= 1

    def test_gaussian_times_sinc(self):
        # oracle: (1/5) int_0^inf e^{-2k^2} sin(5k) dk = D(5/(2 sqrt2)) / (5 sqrt2)
        target = float(dawsn(5.0 / (2.0 * math.sqrt(2.0)))) / (5.0 * math.sqrt(2.0))
        f = lambda k: k * math.exp(-2.0 * k * k) * (math.sin(5.0 * k) / (5.0 * k)
                                                    if k > 0 else 1.0)
        res = numerics.integrate_semi_infinite(f, 1e-10, decay_scale=2.0, osc_scale=5.0)
        assert res.value == pytest.approx(target, abs=1e-10)

    def test_exponential_no_hint(self):
        res = numerics.integrate_semi_infinite(lambda k: math.exp(-k), 1e-10)
        assert res.value == pytest.approx(1.0, abs=1e-9)

    def test_complex_integrand(self):
        f = lambda k: math.exp(-k * k) * complex(math.cos(k), -math.sin(k))
        res = numerics.integrate_semi_infinite(f, 1e-11, decay_scale=1.0, osc_scale=1.0)
        re_t, _ = quad(lambda k: math.exp(-k * k) * math.cos(k), 0, 20, epsabs=1e-14)
        im_t, _ = quad(lambda k: -math.exp(-k * k) * math.sin(k), 0, 20, epsabs=1e-14)
        assert res.value.real == pytest.approx(re_t, abs=1e-11)
        assert res.value.imag == pytest.approx(im_t, abs=1e-11)

    def test_deterministic(self):
        f = lambda k: k * math.exp(-0.3 * k * k) * math.sin(7.0 * k)
        a = numerics.integrate_semi_infinite(f, 1e-11, decay_scale=0.3, osc_scale=7.0)
        b = numerics.integrate_semi_infinite(f, 1e-11, decay_scale=0.3, osc_scale=7.0)
        assert a.value == b.value  # bit-identical
        assert a.evaluations == b.evaluations

    def test_nondecaying_integrand_raises(self):
        with pytest.raises(ConvergenceError):
            numerics.integrate_semi_infinite(lambda k: 1.0 / (1.0 + k), 1e-10)

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            numerics.integrate_semi_infinite(lambda k: math.exp(-k * k), 0.0)


class TestFitLoglogSlope:
    def test_exact_quadratic(self):
        fit = numerics.fit_loglog_slope([(1.0, 1.0), (2.0, 4.0), (4.0, 16.0)])
        assert fit.slope == pytest.approx(2.0, abs=1e-12)
        assert fit.residual == pytest.approx(0.0, abs=1e-12)

    def test_exact_quartic(self):
        fit = numerics.fit_loglog_slope([(1.0, 1.0), (2.0, 16.0), (4.0, 256.0)])
        assert fit.slope == pytest.approx(4.0, abs=1e-12)

    def test_jittered_quartic(self):
        rng = np.random.default_rng(3)
        pts = [(s, 0.7 * s**4 * (1.0 + 0.01 * rng.standard_normal()))
               for s in np.geomspace(0.5, 8.0, 12)]
        fit = numerics.fit_loglog_slope(pts)
        assert fit.slope == pytest.approx(4.0, abs=0.05)
        assert fit.residual < 0.05

    def test_domain_errors(self):
        with pytest.raises(InsufficientDataError):
            numerics.fit_loglog_slope([(1.0, 1.0), (2.0, 4.0)])
        with pytest.raises(ValueError):
            numerics.fit_loglog_slope([(1.0, 1.0), (2.0, 4.0), (-1.0, 9.0)])
