import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from beatlab.core import ConvergenceError
from beatlab.quadrature import GAUSS_W, KRONROD_W, NODES, initial_breakpoints, integrate


def test_rule_weights():
    assert KRONROD_W.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_W.sum() == pytest.approx(2.0, abs=1e-15)
    np.testing.assert_allclose(NODES, -NODES[::-1], atol=0)


@pytest.mark.parametrize("deg", range(0, 23))
def test_kronrod_exact_for_polynomials(deg):
    # the 15-point Kronrod rule integrates degree <= 22 exactly
    exact = (1 - (-1) ** (deg + 1)) / (deg + 1)
    assert float(KRONROD_W @ NODES**deg) == pytest.approx(exact, abs=1e-14)


CASES = [
    (np.exp, 0.0, 1.0),
    (lambda x: 1.0 / x, 1e-4, 1e5),
    (lambda x: np.sin(x) ** 2, 0.0, 20.0),
    (lambda x: 1.0 / (1.0 + 1e4 * (x - 0.3) ** 2), 0.0, 1.0),
    (lambda x: x ** (-4 / 3) * (x + 0.01) ** (-4 / 3), 1e-4, 1e5),
]


@pytest.mark.parametrize("f, a, b", CASES)
def test_matches_scipy_quad(f, a, b):
    pts = initial_breakpoints(a, b)
    ref = sum(sp_integrate.quad(f, lo, hi, epsabs=0, epsrel=1e-12, limit=500)[0] for lo, hi in zip(pts[:-1], pts[1:]))
    value, err = integrate(f, a, b, rtol=1e-10)
    assert value == pytest.approx(ref, rel=1e-9)
    assert err <= 1e-10 * abs(value)


def test_log_integral_exact():
    value, _ = integrate(lambda x: 1.0 / x, 1e-4, 1e5)
    assert value == pytest.approx(math.log(1e9), rel=1e-8)


def test_reversed_and_empty_bounds():
    v, _ = integrate(np.cos, 1.0, 0.0)
    assert v == pytest.approx(-math.sin(1.0), rel=1e-12)
    assert integrate(np.cos, 2.0, 2.0) == (0.0, 0.0)


def test_scalar_only_integrand():
    v, _ = integrate(lambda x: math.exp(-x), 0.0, 5.0)
    assert v == pytest.approx(1.0 - math.exp(-5.0), rel=1e-10)


def test_nonconvergence_raises():
    with pytest.raises(ConvergenceError):
        integrate(lambda x: np.sign(x - 1 / 3) * np.abs(x - 1 / 3) ** -0.999, 0.0, 1.0, max_panels=50)


def test_nonfinite_integrand_raises():
    with pytest.raises(ConvergenceError):
        integrate(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


def test_breakpoints():
    pts = initial_breakpoints(1e-4, 1e5)
    assert pts[0] == 1e-4 and pts[-1] == 1e5
    assert np.all(np.diff(np.log10(pts)) <= 0.25 + 1e-12)
    np.testing.assert_array_equal(initial_breakpoints(0.0, 1.0), [0.0, 1.0])
