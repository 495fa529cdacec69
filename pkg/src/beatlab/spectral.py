"""Periodogram, logarithmic binning, power-law fitting and the pink-noise verdict."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import Psd, SlopeFit, TimeSeries, require_finite

PINK_SLOPE_RANGE = (-1.5, -0.5)
PINK_MIN_DECADES = 2.0
PINK_MIN_R_SQUARED = 0.8


class Window(str, enum.Enum):
    RECT = "rect"
    HANN = "hann"


class Detrend(str, enum.Enum):
    SUBTRACT_MEAN = "subtract_mean"
    NONE = "none"


@dataclass(frozen=True)
class FitConfig:
    band_lo_hz: float
    band_hi_hz: float
    bins_per_decade: int = 8
    detrend: Detrend = Detrend.SUBTRACT_MEAN
    window: Window = Window.HANN

    def __post_init__(self):
        require_finite("fit band", self.band_lo_hz, self.band_hi_hz)
        object.__setattr__(self, "detrend", Detrend(self.detrend))
        object.__setattr__(self, "window", Window(self.window))
        if not 0 < self.band_lo_hz < self.band_hi_hz:
            raise ValueError("need 0 < band_lo_hz < band_hi_hz")
        if int(self.bins_per_decade) != self.bins_per_decade or self.bins_per_decade < 1:
            raise ValueError("bins_per_decade must be a positive integer")

    def check_nyquist(self, nyquist_hz: float) -> None:
        if self.band_hi_hz > nyquist_hz:
            raise ValueError(
                f"band_hi_hz {self.band_hi_hz!r} exceeds Nyquist {nyquist_hz!r}"
            )


def window_values(window: Window, n: int) -> np.ndarray:
    if Window(window) is Window.HANN:
        # periodic Hann; its mean square is exactly 3/8
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)
    return np.ones(n)


def periodogram(
    x: TimeSeries,
    window: Window | str = Window.HANN,
    detrend: Detrend | str = Detrend.SUBTRACT_MEAN,
) -> Psd:
    """One-sided periodogram on ``f_k = k fs / M``, ``k = 1 .. M//2``.

    ``power[k] = 2 |X_k|^2 / (fs M W)`` with ``W`` the window's mean square;
    the Nyquist bin of an even-length record is not doubled.  The DC bin is
    never returned, so ``sum(power) * fs / M`` equals the variance of the
    windowed series divided by ``W``.
    """
    window, detrend = Window(window), Detrend(detrend)
    m = len(x)
    if m < 8:
        raise ValueError("periodogram needs at least 8 samples")
    fs = x.spec.sample_rate_hz
    s = x.samples
    if detrend is Detrend.SUBTRACT_MEAN:
        s = s - s.mean()
    w = window_values(window, m)
    wpow = float(np.mean(w * w))
    spec = np.fft.rfft(s * w)
    power = (2.0 / (fs * m * wpow)) * (spec.real**2 + spec.imag**2)
    if m % 2 == 0:
        power[-1] *= 0.5
    freqs = np.arange(power.size) * (fs / m)
    return Psd(freqs[1:], power[1:], f"onesided-density/{window.value}/{detrend.value}")


def _bin_index(freqs: np.ndarray, bins_per_decade: int) -> np.ndarray:
    # bins are aligned to decades: [10^(k/b), 10^((k+1)/b))
    return np.floor(np.log10(freqs) * bins_per_decade + 1e-9).astype(np.int64)


def _band_points(psd: Psd, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    if not 0 < lo < hi:
        raise ValueError("need 0 < band lo < band hi")
    f, p = psd.freqs_hz, psd.power
    sel = (f >= lo) & (f <= hi)
    return f[sel], p[sel]


def _groups(f: np.ndarray, bins_per_decade: int) -> list[np.ndarray]:
    idx = _bin_index(f, bins_per_decade)
    cuts = np.nonzero(np.diff(idx))[0] + 1
    return np.split(np.arange(f.size), cuts)


class PowerMean(str, enum.Enum):
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"


def log_bin(
    psd: Psd,
    bins_per_decade: int,
    band: tuple[float, float],
    power_mean: PowerMean | str = PowerMean.ARITHMETIC,
) -> Psd:
    """Average a PSD in logarithmic frequency bins.

    Each populated bin yields the geometric mean of its frequencies and the
    arithmetic mean of its power.  Empty bins are dropped.

    ``power_mean="geometric"`` averages log power instead, which maps an
    exact power law onto itself; it is unsuitable for line spectra, where
    it follows the floor between lines.
    """
    power_mean = PowerMean(power_mean)
    f, p = _band_points(psd, *band)
    groups = _groups(f, bins_per_decade) if f.size else []
    if len(groups) < 2:
        raise ValueError(f"fewer than 2 populated bins in band {band!r}")
    fb = np.array([math.exp(np.log(f[g]).mean()) for g in groups])
    if power_mean is PowerMean.GEOMETRIC:
        with np.errstate(divide="ignore"):
            pb = np.array([math.exp(np.log(p[g]).mean()) for g in groups])
    else:
        pb = np.array([p[g].mean() for g in groups])
    return Psd(fb, pb, f"{psd.convention_tag}/logbinned-{power_mean.value}")


def _binned_model(log_f_groups, slope):
    # log10 of the bin-average of f**slope, computed stably
    out = np.empty(len(log_f_groups))
    dout = np.empty(len(log_f_groups))
    for i, lf in enumerate(log_f_groups):
        e = slope * lf
        top = e.max()
        w = np.exp(e - top)
        out[i] = (top + math.log(w.mean())) / math.log(10.0)
        dout[i] = float((w * lf).sum() / w.sum()) / math.log(10.0)
    return out, dout


def fit_slope(psd: Psd, cfg: FitConfig, min_points: int = 5, max_iter: int = 100) -> SlopeFit:
    """Fit ``power = 10**b * f**s`` to the log-binned PSD inside the band.

    The model is compared with each bin's mean power through its own
    bin average, ``log10 mean_{f in bin}(10**b f**s)``, and ``(s, b)`` are
    found by Gauss-Newton least squares in ``log10`` power, starting from
    ordinary least squares on the bin centres.  An exact power law is
    therefore recovered exactly whatever the frequency grid.

    Raises
    ------
    ValueError
        Fewer than ``min_points`` populated bins, or zero power in a bin.
    """
    f, p = _band_points(psd, cfg.band_lo_hz, cfg.band_hi_hz)
    groups = _groups(f, cfg.bins_per_decade) if f.size else []
    if len(groups) < min_points:
        raise ValueError(
            f"only {len(groups)} populated bins in [{cfg.band_lo_hz!r}, {cfg.band_hi_hz!r}] Hz; "
            f"need {min_points}"
        )
    pbar = np.array([p[g].mean() for g in groups])
    if np.any(pbar <= 0):
        raise ValueError("zero power in fit band; log undefined")
    y = np.log10(pbar)
    log_f = [np.log(f[g]) for g in groups]
    x = np.array([lf.mean() for lf in log_f]) / math.log(10.0)

    slope, intercept = np.polyfit(x, y, 1)
    for _ in range(max_iter):
        m, dm = _binned_model(log_f, slope)
        resid = y - intercept - m
        jac = np.column_stack([dm, np.ones_like(dm)])
        step, *_ = np.linalg.lstsq(jac, resid, rcond=None)
        slope += step[0]
        intercept += step[1]
        if abs(step[0]) <= 1e-15 * max(1.0, abs(slope)):
            break

    m, dm = _binned_model(log_f, slope)
    resid = y - intercept - m
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    n = len(groups)
    stderr = float("nan")
    if n > 2:
        jac = np.column_stack([dm, np.ones_like(dm)])
        cov = np.linalg.pinv(jac.T @ jac) * (ss_res / (n - 2))
        stderr = math.sqrt(max(cov[0, 0], 0.0))
    return SlopeFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=min(max(r2, 0.0), 1.0),
        band_lo_hz=cfg.band_lo_hz,
        band_hi_hz=cfg.band_hi_hz,
        points_used=n,
        slope_stderr=stderr,
    )


@dataclass(frozen=True)
class Verdict:
    is_pink: bool
    failed: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.is_pink

    def rationale(self) -> str:
        return "all conditions met" if self.is_pink else "; ".join(self.failed)


def pink_verdict(fit: SlopeFit) -> Verdict:
    """Pink iff the slope is in [-1.5, -0.5] over at least 2 decades with R^2 >= 0.8."""
    lo, hi = PINK_SLOPE_RANGE
    failed = []
    if not lo <= fit.slope <= hi:
        failed.append(f"slope {fit.slope:.3f} outside [{lo}, {hi}]")
    if fit.decades < PINK_MIN_DECADES:
        failed.append(f"band spans {fit.decades:.2f} < {PINK_MIN_DECADES} decades")
    if fit.r_squared < PINK_MIN_R_SQUARED:
        failed.append(f"R^2 {fit.r_squared:.3f} < {PINK_MIN_R_SQUARED}")
    return Verdict(not failed, tuple(failed))


def analyze(x: TimeSeries, cfg: FitConfig) -> tuple[Psd, SlopeFit, Verdict]:
    cfg.check_nyquist(x.spec.nyquist_hz)
    psd = periodogram(x, cfg.window, cfg.detrend)
    fit = fit_slope(psd, cfg)
    return psd, fit, pink_verdict(fit)
