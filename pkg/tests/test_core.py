import numpy as np
import pytest

from beatlab.core import (
    Psd,
    RandomField,
    SamplingSpec,
    SlopeFit,
    TimeSeries,
    derive_seed,
    make_uniform_field,
)


def test_sampling_grid():
    s = SamplingSpec(100.0, 1000)
    assert s.duration_s == 10.0
    assert s.nyquist_hz == 50.0
    assert s.dt == 0.01
    t = s.times()
    assert t.size == 1000 and t[0] == 0.0 and t[-1] == pytest.approx(9.99)


@pytest.mark.parametrize("fs, n", [(0.0, 10), (-1.0, 10), (float("nan"), 10), (10.0, 1), (10.0, 2.5)])
def test_sampling_rejects(fs, n):
    with pytest.raises(ValueError):
        SamplingSpec(fs, n)


def test_timeseries_is_readonly_and_checked():
    x = TimeSeries(SamplingSpec(10.0, 4), [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(ValueError):
        x.samples[0] = 5.0
    with pytest.raises(ValueError):
        TimeSeries(SamplingSpec(10.0, 4), [1.0, 2.0])
    with pytest.raises(ValueError):
        TimeSeries(SamplingSpec(10.0, 2), [1.0, np.inf])


def test_uniform_field_reproducible():
    a = make_uniform_field(7, 0.0, 30.0, 1000)
    b = make_uniform_field(7, 0.0, 30.0, 1000)
    np.testing.assert_array_equal(a, b)
    assert a.min() >= 0.0 and a.max() <= 30.0
    assert not np.array_equal(a, make_uniform_field(8, 0.0, 30.0, 1000))


def test_uniform_field_degenerate_range():
    np.testing.assert_array_equal(make_uniform_field(0, 2.5, 2.5, 3), [2.5, 2.5, 2.5])


def test_uniform_field_matches_pcg64_stream():
    expected = np.random.Generator(np.random.PCG64(3)).uniform(1.0, 2.0, 5)
    np.testing.assert_array_equal(RandomField(3, 1.0, 2.0, 5).draw(), expected)


@pytest.mark.parametrize("lo, hi, count, seed", [(1.0, 0.0, 3, 0), (0.0, 1.0, 0, 0), (0.0, 1.0, 3, -1)])
def test_random_field_rejects(lo, hi, count, seed):
    with pytest.raises(ValueError):
        RandomField(seed, lo, hi, count)


def test_derive_seed_stable_and_distinct():
    assert derive_seed(1, 13) == derive_seed(1, 13)
    assert derive_seed(1, 13) != derive_seed(2, 13)
    assert derive_seed(1, 13) != derive_seed(1, 14)


def test_psd_validation():
    Psd(np.array([1.0, 2.0]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        Psd(np.array([0.0, 1.0]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        Psd(np.array([2.0, 1.0]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        Psd(np.array([1.0, 2.0]), np.array([1.0, -1.0]))


def test_slopefit_decades():
    fit = SlopeFit(-1.0, 0.0, 1.0, 0.01, 100.0, 10)
    assert fit.decades == pytest.approx(4.0)
