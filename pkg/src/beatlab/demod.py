"""Demodulation operators applied to a series before spectral analysis.

Mean thresholds zero samples strictly below the mean; samples equal to
the mean are kept.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import SamplingSpec, TimeSeries


class DemodKind(str, enum.Enum):
    IDENTITY = "identity"
    SQUARE = "square"
    THRESHOLD_KEEP_ABOVE_MEAN = "threshold_keep_above_mean"
    BINARY_ABOVE_MEAN = "binary_above_mean"
    BINARY_BELOW_MEAN = "binary_below_mean"
    THRESHOLD_RAW_ABOVE_MEAN = "threshold_raw_above_mean"
    HALF_WAVE_RECTIFY = "half_wave_rectify"
    SEGMENT_QUADRATIC_MEAN = "segment_quadratic_mean"
    SEGMENT_MEAN = "segment_mean"
    DECIMATE = "decimate"


class SegmentMode(str, enum.Enum):
    MEAN = "mean"
    QUADRATIC_MEAN = "quadratic_mean"


class Quadratic(str, enum.Enum):
    RMS = "rms"
    MEAN_SQUARE = "mean_square"


_SEGMENT_KINDS = {DemodKind.SEGMENT_QUADRATIC_MEAN, DemodKind.SEGMENT_MEAN}


@dataclass(frozen=True)
class DemodSpec:
    kind: DemodKind
    segments: int | None = None
    factor: int | None = None
    quadratic: Quadratic = Quadratic.RMS

    def __post_init__(self):
        object.__setattr__(self, "kind", DemodKind(self.kind))
        object.__setattr__(self, "quadratic", Quadratic(self.quadratic))
        if self.kind in _SEGMENT_KINDS:
            if self.segments is None or int(self.segments) != self.segments or self.segments < 1:
                raise ValueError(f"{self.kind.value} needs a positive integer 'segments'")
        elif self.segments is not None:
            raise ValueError(f"'segments' does not apply to {self.kind.value}")
        if self.kind is DemodKind.DECIMATE:
            if self.factor is None or int(self.factor) != self.factor or self.factor < 2:
                raise ValueError("decimate needs an integer 'factor' >= 2")
        elif self.factor is not None:
            raise ValueError(f"'factor' does not apply to {self.kind.value}")

    def label(self) -> str:
        if self.kind in _SEGMENT_KINDS:
            return f"{self.kind.value}({self.segments})"
        if self.kind is DemodKind.DECIMATE:
            return f"{self.kind.value}({self.factor})"
        return self.kind.value


def square(x: TimeSeries) -> TimeSeries:
    return x.with_samples(np.square(x.samples))


def threshold_keep_above_mean(x: TimeSeries) -> TimeSeries:
    """Zero the samples below the mean and keep the rest unchanged."""
    s = x.samples
    return x.with_samples(np.where(s >= s.mean(), s, 0.0))


def binary_above_mean(x: TimeSeries) -> TimeSeries:
    s = x.samples
    return x.with_samples((s >= s.mean()).astype(float))


def binary_below_mean(x: TimeSeries) -> TimeSeries:
    s = x.samples
    return x.with_samples((s < s.mean()).astype(float))


def threshold_raw_above_mean(x: TimeSeries) -> TimeSeries:
    """Same rule as :func:`threshold_keep_above_mean`, meant for the unsquared signal."""
    return threshold_keep_above_mean(x)


def half_wave_rectify(x: TimeSeries) -> TimeSeries:
    return x.with_samples(np.maximum(x.samples, 0.0))


def segment_aggregate(
    x: TimeSeries,
    segments: int,
    mode: SegmentMode | str = SegmentMode.QUADRATIC_MEAN,
    quadratic: Quadratic | str = Quadratic.RMS,
) -> TimeSeries:
    """Collapse the series into ``segments`` equal segments.

    Tail samples that do not fill a segment are dropped.  The output rate is
    the input rate divided by the segment length.

    Parameters
    ----------
    mode : SegmentMode
        ``MEAN`` averages each segment; ``QUADRATIC_MEAN`` averages squares.
    quadratic : Quadratic
        For ``QUADRATIC_MEAN``: ``RMS`` takes the square root of the mean
        square, ``MEAN_SQUARE`` does not.
    """
    mode, quadratic = SegmentMode(mode), Quadratic(quadratic)
    n = len(x)
    if int(segments) != segments or segments < 1:
        raise ValueError("segments must be a positive integer")
    if segments > n:
        raise ValueError(f"segments ({segments}) exceeds the number of samples ({n})")
    seg_len = n // segments
    if segments < 2:
        raise ValueError("need at least 2 segments for a series")
    blocks = x.samples[: segments * seg_len].reshape(segments, seg_len)
    if mode is SegmentMode.MEAN:
        y = blocks.mean(axis=1)
    else:
        y = np.square(blocks).mean(axis=1)
        if quadratic is Quadratic.RMS:
            y = np.sqrt(y)
    spec = SamplingSpec(x.spec.sample_rate_hz / seg_len, segments)
    return TimeSeries(spec, y)


def decimate(x: TimeSeries, factor: int) -> TimeSeries:
    """Keep every ``factor``-th sample, without an anti-alias filter."""
    if int(factor) != factor or factor < 2:
        raise ValueError("factor must be an integer >= 2")
    y = x.samples[::factor]
    return TimeSeries(SamplingSpec(x.spec.sample_rate_hz / factor, y.size), y)


def apply(x: TimeSeries, spec: DemodSpec) -> TimeSeries:
    k = spec.kind
    if k is DemodKind.IDENTITY:
        return x
    if k is DemodKind.SQUARE:
        return square(x)
    if k is DemodKind.THRESHOLD_KEEP_ABOVE_MEAN:
        return threshold_keep_above_mean(x)
    if k is DemodKind.BINARY_ABOVE_MEAN:
        return binary_above_mean(x)
    if k is DemodKind.BINARY_BELOW_MEAN:
        return binary_below_mean(x)
    if k is DemodKind.THRESHOLD_RAW_ABOVE_MEAN:
        return threshold_raw_above_mean(x)
    if k is DemodKind.HALF_WAVE_RECTIFY:
        return half_wave_rectify(x)
    if k is DemodKind.SEGMENT_QUADRATIC_MEAN:
        return segment_aggregate(x, spec.segments, SegmentMode.QUADRATIC_MEAN, spec.quadratic)
    if k is DemodKind.SEGMENT_MEAN:
        return segment_aggregate(x, spec.segments, SegmentMode.MEAN)
    if k is DemodKind.DECIMATE:
        return decimate(x, spec.factor)
    raise ValueError(f"unknown demodulation kind {k!r}")


def apply_chain(x: TimeSeries, chain: Iterable[DemodSpec]) -> TimeSeries:
    for step in chain:
        x = apply(x, step)
    return x
