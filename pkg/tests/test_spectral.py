import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beatlab import spectral as sp
from beatlab.core import Psd, SlopeFit
from beatlab.spectral import Detrend, FitConfig, Window

from conftest import series


def _power_law(exponent, n=125_000, df=1 / 2500):
    f = np.arange(1, n + 1) * df
    return Psd(f, 3.0 * f**exponent)


@pytest.mark.parametrize("n", [4096, 4097])
@pytest.mark.parametrize("window", list(Window))
def test_parseval(rng, n, window):
    x = series(rng.normal(size=n) + 0.3, fs=50.0)
    psd = sp.periodogram(x, window, Detrend.NONE)
    w = sp.window_values(window, n)
    xw = x.samples * w
    wpow = np.mean(w * w)
    expected = (np.mean(xw**2) - np.mean(xw) ** 2) / wpow
    assert psd.power.sum() * 50.0 / n == pytest.approx(expected, rel=1e-10)


def test_periodogram_grid_and_tag():
    x = series(np.sin(np.arange(1000)), fs=10.0)
    psd = sp.periodogram(x)
    assert psd.freqs_hz[0] == pytest.approx(0.01) and psd.freqs_hz[-1] == pytest.approx(5.0)
    assert len(psd) == 500
    assert psd.convention_tag == "onesided-density/hann/subtract_mean"


def test_sine_lands_in_its_bin():
    fs, n = 100.0, 10_000
    t = np.arange(n) / fs
    psd = sp.periodogram(series(2.0 * np.sin(2 * np.pi * 7.0 * t), fs), Window.RECT)
    k = int(np.argmax(psd.power))
    assert psd.freqs_hz[k] == pytest.approx(7.0)
    # all the power (variance 2) sits in one bin of width fs/n
    assert psd.power[k] * fs / n == pytest.approx(2.0, rel=1e-12)
    others = np.delete(psd.power, k)
    assert others.max() < 1e-20 * psd.power[k]


def test_hann_mean_square():
    assert np.mean(sp.window_values(Window.HANN, 1024) ** 2) == pytest.approx(3 / 8, rel=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-3, 1e3), st.integers(0, 2**32 - 1))
def test_scale_equivariance(a, seed):
    x = np.random.default_rng(seed).normal(size=2048).cumsum()
    cfg = FitConfig(0.2, 20.0)
    p1 = sp.periodogram(series(x))
    p2 = sp.periodogram(series(a * x))
    np.testing.assert_allclose(p2.power, a * a * p1.power, rtol=1e-12)
    s1 = sp.fit_slope(p1, cfg).slope
    s2 = sp.fit_slope(p2, cfg).slope
    assert s2 == pytest.approx(s1, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2047), st.integers(0, 2**32 - 1))
def test_circular_shift_invariance(shift, seed):
    x = np.random.default_rng(seed).normal(size=2048)
    p1 = sp.periodogram(series(x), Window.RECT, Detrend.NONE).power
    p2 = sp.periodogram(series(np.roll(x, shift)), Window.RECT, Detrend.NONE).power
    big = p1 > 1e-12 * p1.max()
    np.testing.assert_allclose(p2[big], p1[big], rtol=1e-10)


def test_distinct_bins_are_orthogonal():
    # each exact Fourier sine contributes to its own bin only
    fs, n = 64.0, 4096
    t = np.arange(n) / fs
    ks = [3, 50, 700]
    x = sum(np.sin(2 * np.pi * k * fs / n * t) for k in ks)
    p = sp.periodogram(series(x, fs), Window.RECT).power
    assert set(np.nonzero(p > 1e-12 * p.max())[0] + 1) == set(ks)


@pytest.mark.parametrize("exponent", [-1.0, -1.5, -0.5, 0.8])
def test_fit_recovers_exact_power_law(exponent):
    psd = _power_law(exponent)
    fit = sp.fit_slope(psd, FitConfig(4 / 2500, 50.0))
    assert fit.slope == pytest.approx(exponent, abs=1e-9)
    assert fit.intercept == pytest.approx(math.log10(3.0), abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_reports_band_and_points():
    fit = sp.fit_slope(_power_law(-1.0), FitConfig(1e-2, 10.0, bins_per_decade=8))
    assert (fit.band_lo_hz, fit.band_hi_hz) == (1e-2, 10.0)
    assert fit.decades == pytest.approx(3.0)
    assert fit.points_used <= 3 * 8 + 1


def test_log_bin_geometric_closes_power_laws():
    for exponent in (-1.0, -1.5):
        b = sp.log_bin(_power_law(exponent), 8, (4 / 2500, 50.0), power_mean="geometric")
        slope = np.polyfit(np.log10(b.freqs_hz), np.log10(b.power), 1)[0]
        assert slope == pytest.approx(exponent, abs=1e-6)


def test_log_bin_arithmetic_is_biased_but_close():
    b = sp.log_bin(_power_law(-1.0), 8, (4 / 2500, 50.0))
    slope = np.polyfit(np.log10(b.freqs_hz), np.log10(b.power), 1)[0]
    assert abs(slope + 1.0) < 1e-3


def test_log_bin_leaves_bin_centres_unchanged():
    f = 10 ** ((np.arange(-16, 16) + 0.5) / 8)
    p = np.random.default_rng(0).uniform(1, 2, f.size)
    b = sp.log_bin(Psd(f, p), 8, (f[0], f[-1]))
    np.testing.assert_allclose(b.freqs_hz, f, rtol=1e-14)
    np.testing.assert_array_equal(b.power, p)


def test_log_bin_count():
    b = sp.log_bin(_power_law(-1.0, n=10**6, df=1e-2), 8, (1e-2, 1e2))
    assert len(b) <= 4 * 8 + 1


def test_log_bin_needs_two_bins():
    with pytest.raises(ValueError):
        sp.log_bin(_power_law(-1.0), 8, (1.0, 1.1))


def test_fit_errors():
    with pytest.raises(ValueError, match="populated bins"):
        sp.fit_slope(_power_law(-1.0), FitConfig(1.0, 1.5))
    f = np.arange(1, 1001) * 0.1
    with pytest.raises(ValueError, match="zero power"):
        sp.fit_slope(Psd(f, np.zeros_like(f)), FitConfig(0.1, 100.0))


def test_fit_config_validation():
    with pytest.raises(ValueError):
        FitConfig(2.0, 1.0)
    with pytest.raises(ValueError):
        FitConfig(1.0, 2.0, bins_per_decade=0)
    with pytest.raises(ValueError):
        FitConfig(1.0, 2.0, window="kaiser")
    with pytest.raises(ValueError, match="Nyquist"):
        FitConfig(1.0, 60.0).check_nyquist(50.0)


def _fit(slope, decades, r2):
    return SlopeFit(slope, 0.0, r2, 1.0, 10.0**decades, 20)


def test_verdict():
    assert sp.pink_verdict(_fit(-1.0, 4, 0.95))
    v = sp.pink_verdict(_fit(0.8, 4, 0.95))
    assert not v and "slope" in v.rationale()
    v = sp.pink_verdict(_fit(-1.0, 1, 0.95))
    assert not v and "decades" in v.rationale()
    v = sp.pink_verdict(_fit(-1.0, 3, 0.5))
    assert not v and "R^2" in v.rationale()
    assert sp.pink_verdict(_fit(-0.5, 2, 0.8)) and sp.pink_verdict(_fit(-1.5, 2, 0.8))


def test_analyze_checks_nyquist(rng):
    with pytest.raises(ValueError, match="Nyquist"):
        sp.analyze(series(rng.normal(size=1000)), FitConfig(0.5, 60.0))
