import numpy as np
import pytest

from beatlab.core import SamplingSpec, TimeSeries


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def series(samples, fs=100.0):
    samples = np.asarray(samples, dtype=float)
    return TimeSeries(SamplingSpec(fs, samples.size), samples)
