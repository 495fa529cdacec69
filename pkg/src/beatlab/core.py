"""Shared domain types and the seeded random-number contract."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class BeatlabError(Exception):
    """Base class for errors raised by this package."""


class ConvergenceError(BeatlabError, RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


def require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class SamplingSpec:
    """Uniform time grid ``t_k = k / sample_rate_hz`` for ``k < num_samples``."""

    sample_rate_hz: float = 100.0
    num_samples: int = 250_000

    def __post_init__(self):
        require_finite("sample_rate_hz", self.sample_rate_hz)
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if int(self.num_samples) != self.num_samples or self.num_samples < 2:
            raise ValueError("num_samples must be an integer >= 2")
        object.__setattr__(self, "num_samples", int(self.num_samples))
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    @property
    def duration_s(self) -> float:
        return self.num_samples / self.sample_rate_hz

    @property
    def nyquist_hz(self) -> float:
        return 0.5 * self.sample_rate_hz

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate_hz

    def times(self) -> np.ndarray:
        return np.arange(self.num_samples) / self.sample_rate_hz


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Real samples bound to a :class:`SamplingSpec`."""

    spec: SamplingSpec
    samples: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=float)
        if x.ndim != 1 or x.size != self.spec.num_samples:
            raise ValueError(
                f"expected {self.spec.num_samples} samples, got shape {x.shape}"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError("samples must be finite")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    def __len__(self) -> int:
        return self.spec.num_samples

    def times(self) -> np.ndarray:
        return self.spec.times()

    def with_samples(self, samples: np.ndarray) -> "TimeSeries":
        return TimeSeries(self.spec, samples)


@dataclass(frozen=True)
class RandomField:
    """Seeded i.i.d. uniform draws on ``[range_lo, range_hi]``."""

    seed: int
    range_lo: float
    range_hi: float
    count: int

    def __post_init__(self):
        require_finite("random field range", self.range_lo, self.range_hi)
        if self.range_lo > self.range_hi:
            raise ValueError("range_lo must not exceed range_hi")
        if int(self.count) != self.count or self.count < 1:
            raise ValueError("count must be a positive integer")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(int(self.seed))

    def draw(self) -> np.ndarray:
        return make_uniform_field(self.seed, self.range_lo, self.range_hi, self.count)


def make_uniform_field(seed: int, lo: float, hi: float, count: int) -> np.ndarray:
    """Return ``count`` uniform draws on ``[lo, hi]`` from a PCG64 stream seeded by ``seed``.

    The same arguments always give the same array.
    """
    RandomField(seed, lo, hi, count)  # validation
    if lo == hi:
        return np.full(int(count), float(lo))
    return np.random.default_rng(int(seed)).uniform(lo, hi, int(count))


def derive_seed(seed: int, tag: int) -> int:
    """Independent child seed for an auxiliary stream (e.g. drawing fiducials)."""
    return int(np.random.SeedSequence([int(seed), int(tag)]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True, eq=False)
class Psd:
    """One-sided power spectral density on a positive, increasing frequency grid."""

    freqs_hz: np.ndarray
    power: np.ndarray
    convention_tag: str = "onesided-density"

    def __post_init__(self):
        f = np.asarray(self.freqs_hz, dtype=float)
        p = np.asarray(self.power, dtype=float)
        if f.shape != p.shape or f.ndim != 1:
            raise ValueError("freqs_hz and power must be 1-D arrays of equal length")
        if f.size and (f[0] <= 0 or np.any(np.diff(f) <= 0)):
            raise ValueError("freqs_hz must be positive and strictly increasing")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("power must be finite and nonnegative")
        f.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "freqs_hz", f)
        object.__setattr__(self, "power", p)

    def __len__(self) -> int:
        return self.freqs_hz.size


@dataclass(frozen=True)
class SlopeFit:
    """Power-law fit ``power ~ 10**intercept * f**slope`` over a frequency band."""

    slope: float
    intercept: float
    r_squared: float
    band_lo_hz: float
    band_hi_hz: float
    points_used: int
    slope_stderr: float = float("nan")
    decades: float = field(init=False)

    def __post_init__(self):
        if not 0 < self.band_lo_hz < self.band_hi_hz:
            raise ValueError("need 0 < band_lo_hz < band_hi_hz")
        object.__setattr__(self, "decades", math.log10(self.band_hi_hz / self.band_lo_hz))
