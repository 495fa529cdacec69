import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import hyp2f1

from beatlab import analytic as an
from beatlab.analytic import ExpSyncParams, PowerSyncParams, ResonanceParams

EXP = ExpSyncParams(1.0, 1.0, 1e-4, 1e5)
POW = PowerSyncParams(1.0, 3.0, 1e-4, 1e5)
RES = ResonanceParams(10.0, 0.1)

# 40-digit mpmath quadrature of the beat integrals
Q_EXP_REF = {1e-3: 2397.895262798370594, 1.0: 9.210430367026515711, 100.0: 0.1381451205763069057}
Q_POW_REF = {1e-2: 2372.364762455872750, 1.0: 6.725618770067409192, 100.0: 0.01526017293735055615}


def test_p_exp():
    assert an.p_exp(2.0, ExpSyncParams(3.0, 0.5)) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        an.p_exp(0.0, EXP)


@pytest.mark.parametrize("delta", sorted(Q_EXP_REF))
def test_q_exp_reference(delta):
    assert an.q_exp(delta, EXP) == pytest.approx(Q_EXP_REF[delta], rel=1e-13)


def test_q_exp_matches_quadrature():
    deltas = np.geomspace(1e-3, 1e2, 50)
    closed = an.q_exp(deltas, EXP)
    quad = [an.beat_quadrature_oracle(lambda w: an.p_exp(w, EXP), d, EXP.omega1, EXP.omega2) for d in deltas]
    np.testing.assert_allclose(closed, quad, rtol=1e-6)


def test_q_exp_small_delta_limit():
    # Q -> p^2/lam^2 (1/w1 - 1/w2) as delta -> 0
    d = 1e-12
    assert an.q_exp(d, EXP) == pytest.approx(1 / EXP.omega1 - 1 / EXP.omega2, rel=1e-6)


def test_p_pow_sign_convention():
    neg = PowerSyncParams(1.0, -3.0)
    assert neg.c == pytest.approx(-1 / 3)
    assert an.p_pow(8.0, neg) == pytest.approx(1 / 3 * 8.0 ** (-2 / 3))
    assert an.p_pow(8.0, neg, signed=True) == pytest.approx(-1 / 3 * 8.0 ** (-2 / 3))


def test_power_params_validation():
    with pytest.raises(ValueError):
        PowerSyncParams(alpha=0.0)
    with pytest.raises(ValueError):
        PowerSyncParams(omega1=2.0, omega2=1.0)


def _q_pow_hyp2f1(delta, params):
    # antiderivative of (w (w + d))^-b is d^-b w^(1-b)/(1-b) 2F1(b, 1-b; 2-b; -w/d)
    b = params.beta
    a = 1.0 - b

    def F(w):
        return delta ** (-b) * w**a / a * hyp2f1(b, a, a + 1.0, -w / delta)

    return params.c**2 * (F(params.omega2) - F(params.omega1))


@pytest.mark.parametrize("alpha", [3.0, 5.0, -3.0])
@pytest.mark.parametrize("delta", [1e-3, 0.1, 10.0, 1e3])
def test_q_pow_matches_hypergeometric(alpha, delta):
    params = PowerSyncParams(1.0, alpha, 1e-4, 1e5)
    assert an.q_pow(delta, params) == pytest.approx(_q_pow_hyp2f1(delta, params), rel=1e-7)


@pytest.mark.parametrize("delta", sorted(Q_POW_REF))
def test_q_pow_reference(delta):
    assert an.q_pow(delta, POW) == pytest.approx(Q_POW_REF[delta], rel=1e-7)


def test_q_pow_vector_shape():
    out = an.q_pow(np.array([[1.0, 2.0]]), POW)
    assert out.shape == (1, 2)


def test_q_pow_degenerate_range():
    assert an.q_pow(1.0, PowerSyncParams(1.0, 3.0, 2.0, 2.0)) == 0.0


def test_asymptotic_exponent():
    assert an.q_pow_asymptotic_exponent(3.0) == pytest.approx(-5 / 3)
    assert an.q_pow_asymptotic_exponent(-3.0) == pytest.approx(-1 / 3)


def test_resonance_curve_peak():
    assert an.resonance_curve(10.0, RES) == pytest.approx(RES.peak)
    assert RES.peak == pytest.approx(400.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-6, 1.0))
def test_resonance_inverse_roundtrip(frac):
    t = frac * RES.peak
    w = an.resonance_inverse(t, RES)
    assert w >= RES.omega0
    assert an.resonance_curve(w, RES) == pytest.approx(t, rel=1e-10)


def test_resonance_inverse_domain():
    for bad in (0.0, -1.0, RES.peak * 1.001, np.nan):
        with pytest.raises(ValueError):
            an.resonance_inverse(bad, RES)
    assert an.resonance_inverse(RES.peak, RES) == pytest.approx(RES.omega0)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-4, 50.0))
def test_p_resonance_odd(x):
    assert an.p_resonance(RES.omega0 + x, RES) == pytest.approx(-an.p_resonance(RES.omega0 - x, RES), rel=1e-12)


def test_p_resonance_maximum_location():
    x = np.linspace(1e-4, 0.2, 200_001)
    p = an.p_resonance(RES.omega0 + x, RES)
    assert x[np.argmax(p)] == pytest.approx(RES.kappa / (2 * math.sqrt(3)), abs=2e-6)


@pytest.mark.parametrize("t", [1.0, 50.0, 300.0, 399.0])
def test_p_resonance_is_inverse_derivative(t):
    # p |dw/dt|^-1 evaluated by central differences on the inverse
    h = 1e-6 * t
    dwdt = (an.resonance_inverse(t + h, RES) - an.resonance_inverse(t - h, RES)) / (2 * h)
    w = an.resonance_inverse(t, RES)
    assert an.p_resonance(w, RES) == pytest.approx(abs(1 / dwdt), rel=1e-6)


def test_exp_approx_reference():
    # mpmath root of d2/dt2 ln w(t) and tangent line at 40 digits
    approx = an.exp_approx_at_inflection(RES)
    assert approx.t_star == pytest.approx(299.71160397474996, rel=1e-8)
    assert approx.B == pytest.approx(1.918956026526515e-05, rel=1e-6)
    assert approx.A == pytest.approx(10.08676888614384, rel=1e-9)


def test_exp_approx_tracks_log_omega_on_upper_half():
    approx = an.exp_approx_at_inflection(RES)
    t = np.linspace(RES.peak / 2, RES.peak, 1001)
    ln_w = np.log(an.resonance_inverse(t, RES))
    line = math.log(approx.A) - approx.B * t
    assert np.max(np.abs(line - ln_w) / ln_w) <= 0.05
    np.testing.assert_allclose(approx(t), np.exp(line), rtol=1e-12)


def test_local_loglog_slope():
    assert an.local_loglog_slope(lambda x: 3 * x**-1.5, 2.0, 50.0) == pytest.approx(-1.5)
    with pytest.warns(RuntimeWarning):
        assert math.isnan(an.local_loglog_slope(lambda x: 0.0, 1.0, 2.0))
