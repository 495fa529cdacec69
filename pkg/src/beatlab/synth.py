"""Wave-bank synthesis: superpositions of unit sinusoids whose frequencies
crowd around a fiducial frequency.

Every bank draws its random field first (``r_i``, in index order, including
any redraws), then the phases ``theta_i`` from the same generator.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import analytic
from .analytic import ResonanceParams
from .core import RandomField, SamplingSpec, TimeSeries, require_finite

# Lower clip for r when r**-alpha diverges at 0.
POWER_R_FLOOR = 1e-3
# Frequencies above this fraction of Nyquist are redrawn.
NYQUIST_GUARD = 0.9
MAX_REDRAW_ROUNDS = 1000

_BLOCK = 1024
_WAVE_CHUNK = 2048


class Mechanism(str, enum.Enum):
    EXPONENTIAL = "exponential"
    POWER = "power"
    RESONANCE = "resonance"
    IR_CASCADE = "ir_cascade"
    TWO_WAVE = "two_wave"


class PhaseMode(str, enum.Enum):
    ZERO = "zero"
    UNIFORM_RANDOM = "uniform_random"


@dataclass(frozen=True)
class WaveBankConfig:
    """Parameters of one wave bank.

    ``fiducial_hz`` may be a tuple; waves are then split into equal
    contiguous blocks, one block per fiducial (remainder to the last).
    For ``IR_CASCADE`` the field's range is ignored: the field only supplies
    the seed and the number of shifts, drawn log-uniformly on
    ``[shift_lo, shift_hi]``.
    """

    mechanism: Mechanism = Mechanism.EXPONENTIAL
    fiducial_hz: float | tuple[float, ...] = 10.0
    mixing: float = 0.2
    field: RandomField = dataclasses.field(default_factory=lambda: RandomField(0, 0.0, 30.0, 1000))
    phase_mode: PhaseMode = PhaseMode.ZERO
    alpha: float | None = None
    resonance: ResonanceParams | None = None
    shift_lo: float | None = None
    shift_hi: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "mechanism", Mechanism(self.mechanism))
        object.__setattr__(self, "phase_mode", PhaseMode(self.phase_mode))
        fid = self.fiducial_hz
        fids = tuple(float(f) for f in fid) if isinstance(fid, (tuple, list)) else (float(fid),)
        if not fids or any(not math.isfinite(f) or f <= 0 for f in fids):
            raise ValueError("fiducial frequencies must be positive and finite")
        object.__setattr__(self, "fiducial_hz", fids if len(fids) > 1 else fids[0])
        require_finite("mixing", self.mixing)

        m = self.mechanism
        if m is Mechanism.POWER:
            if self.alpha is None or not math.isfinite(self.alpha) or self.alpha == 0:
                raise ValueError("power mechanism needs a finite, nonzero alpha")
        elif self.alpha is not None:
            raise ValueError(f"alpha is only meaningful for the power mechanism, not {m.value}")
        if m is Mechanism.RESONANCE:
            if self.resonance is None:
                raise ValueError("resonance mechanism needs resonance parameters")
        elif self.resonance is not None:
            raise ValueError(f"resonance parameters given for {m.value} mechanism")
        if m is Mechanism.IR_CASCADE:
            if self.shift_lo is None or self.shift_hi is None:
                raise ValueError("ir_cascade mechanism needs shift_lo and shift_hi")
            if not 0 < self.shift_lo <= self.shift_hi < min(self.fiducials):
                raise ValueError("need 0 < shift_lo <= shift_hi < fiducial")
        elif self.shift_lo is not None or self.shift_hi is not None:
            raise ValueError(f"shift bounds given for {m.value} mechanism")

    @property
    def fiducials(self) -> tuple[float, ...]:
        f = self.fiducial_hz
        return f if isinstance(f, tuple) else (f,)

    @property
    def num_waves(self) -> int:
        return self.field.count

    def fiducial_per_wave(self) -> np.ndarray:
        fids = np.asarray(self.fiducials)
        n = self.num_waves
        block = n // len(fids)
        if block == 0:
            raise ValueError("fewer waves than fiducial frequencies")
        idx = np.minimum(np.arange(n) // block, len(fids) - 1)
        return fids[idx]


@dataclass(frozen=True, eq=False)
class WaveBank:
    """Realized frequencies and phases of a bank."""

    freqs_hz: np.ndarray
    phases: np.ndarray


def superpose(freqs_hz: Sequence[float], phases: Sequence[float] | None, spec: SamplingSpec) -> np.ndarray:
    """Evaluate ``sum_i sin(2 pi f_i t + theta_i)`` on the grid of ``spec``.

    Uses the angle-addition identity on fixed blocks of samples so the bulk
    of the work is two matrix products per block of waves.  Chunk
    boundaries are fixed, so the result is reproducible for a given input.
    """
    f = np.asarray(freqs_hz, dtype=float)
    th = np.zeros_like(f) if phases is None else np.asarray(phases, dtype=float)
    n = spec.num_samples
    nblocks = -(-n // _BLOCK)
    offsets = np.arange(_BLOCK) / spec.sample_rate_hz
    starts = np.arange(nblocks) * _BLOCK / spec.sample_rate_hz
    out = np.zeros(nblocks * _BLOCK)
    for s in range(0, f.size, _WAVE_CHUNK):
        fc, tc = f[s:s + _WAVE_CHUNK], th[s:s + _WAVE_CHUNK]
        inner = 2.0 * np.pi * np.outer(fc, offsets)
        outer = 2.0 * np.pi * np.outer(starts, fc) + tc
        block = np.sin(outer) @ np.cos(inner) + np.cos(outer) @ np.sin(inner)
        out += block.ravel()
    return out[:n]


def _phases(rng: np.random.Generator, mode: PhaseMode, n: int) -> np.ndarray:
    if mode is PhaseMode.UNIFORM_RANDOM:
        return rng.uniform(0.0, 2.0 * np.pi, n)
    return np.zeros(n)


def _check_nyquist(freqs: np.ndarray, spec: SamplingSpec) -> None:
    top = float(freqs.max())
    if top > spec.nyquist_hz:
        raise ValueError(f"frequency {top!r} Hz exceeds Nyquist {spec.nyquist_hz!r} Hz")


def _expect(cfg: WaveBankConfig, mechanism: Mechanism) -> None:
    if cfg.mechanism is not mechanism:
        raise ValueError(f"expected a {mechanism.value} bank, got {cfg.mechanism.value}")


def _draw_with_redraw(rng, lo, hi, n, freq_of, limit):
    """Uniform draws on [lo, hi]; draws whose frequency is invalid or above
    ``limit`` are redrawn in index order."""
    r = rng.uniform(lo, hi, n) if hi > lo else np.full(n, lo)
    for _ in range(MAX_REDRAW_ROUNDS):
        f = freq_of(r)
        bad = ~(np.isfinite(f) & (f > 0) & (f <= limit))
        if not bad.any():
            return r, f
        if hi == lo:
            break
        r[bad] = rng.uniform(lo, hi, int(bad.sum()))
    raise ValueError(
        f"could not draw frequencies below {limit!r} Hz on r in [{lo!r}, {hi!r}]"
    )


def exponential_bank(cfg: WaveBankConfig, spec: SamplingSpec) -> WaveBank:
    _expect(cfg, Mechanism.EXPONENTIAL)
    fids = cfg.fiducial_per_wave()
    if float(np.max(fids)) * (1 + abs(cfg.mixing)) > spec.nyquist_hz:
        raise ValueError("Nyquist must be at least fiducial * (1 + |mixing|)")
    rng = cfg.field.generator()
    r = rng.uniform(cfg.field.range_lo, cfg.field.range_hi, cfg.num_waves) \
        if cfg.field.range_hi > cfg.field.range_lo else np.full(cfg.num_waves, cfg.field.range_lo)
    freqs = fids * (1.0 + cfg.mixing * np.exp(-r))
    if np.any(freqs <= 0):
        raise ValueError("mixing constant produces non-positive frequencies")
    return WaveBank(freqs, _phases(rng, cfg.phase_mode, cfg.num_waves))


def power_bank(cfg: WaveBankConfig, spec: SamplingSpec) -> WaveBank:
    _expect(cfg, Mechanism.POWER)
    fids = cfg.fiducial_per_wave()
    alpha = cfg.alpha
    lo, hi = cfg.field.range_lo, cfg.field.range_hi
    if alpha > 0:
        lo = max(lo, POWER_R_FLOOR)
        if hi < lo:
            raise ValueError(f"random-field range lies below the r floor {POWER_R_FLOOR}")
    elif lo < 0:
        raise ValueError("power mechanism needs nonnegative r")
    rng = cfg.field.generator()

    def freq_of(r):
        with np.errstate(over="ignore", divide="ignore"):
            return fids * (1.0 + cfg.mixing * r ** (-alpha))

    _, freqs = _draw_with_redraw(rng, lo, hi, cfg.num_waves, freq_of, NYQUIST_GUARD * spec.nyquist_hz)
    return WaveBank(freqs, _phases(rng, cfg.phase_mode, cfg.num_waves))


def resonance_bank(cfg: WaveBankConfig, spec: SamplingSpec) -> WaveBank:
    _expect(cfg, Mechanism.RESONANCE)
    params = cfg.resonance
    rng = cfg.field.generator()

    def freq_of(r):
        return analytic.resonance_inverse(np.clip(r, params.t_min, params.peak), params)

    lo, hi = cfg.field.range_lo, cfg.field.range_hi
    _, freqs = _draw_with_redraw(rng, lo, hi, cfg.num_waves, freq_of, NYQUIST_GUARD * spec.nyquist_hz)
    return WaveBank(np.asarray(freqs, float), _phases(rng, cfg.phase_mode, cfg.num_waves))


def ir_cascade_bank(cfg: WaveBankConfig, spec: SamplingSpec) -> WaveBank:
    _expect(cfg, Mechanism.IR_CASCADE)
    rng = cfg.field.generator()
    shifts = log_uniform_shifts(rng, cfg.shift_lo, cfg.shift_hi, cfg.num_waves)
    freqs = cfg.fiducial_per_wave() - shifts
    _check_nyquist(freqs, spec)
    return WaveBank(freqs, _phases(rng, cfg.phase_mode, cfg.num_waves))


def log_uniform_shifts(rng: np.random.Generator, lo: float, hi: float, n: int) -> np.ndarray:
    """Energy shifts with density proportional to ``1/w`` on ``[lo, hi]``."""
    u = rng.uniform(0.0, 1.0, n)
    return lo * (hi / lo) ** u


_BANKS = {
    Mechanism.EXPONENTIAL: exponential_bank,
    Mechanism.POWER: power_bank,
    Mechanism.RESONANCE: resonance_bank,
    Mechanism.IR_CASCADE: ir_cascade_bank,
}


def realize(cfg: WaveBankConfig, spec: SamplingSpec) -> WaveBank:
    try:
        build = _BANKS[cfg.mechanism]
    except KeyError:
        raise ValueError(f"{cfg.mechanism.value} banks are built with synth_two_wave") from None
    return build(cfg, spec)


def synthesize(cfg: WaveBankConfig, spec: SamplingSpec) -> TimeSeries:
    bank = realize(cfg, spec)
    return TimeSeries(spec, superpose(bank.freqs_hz, bank.phases, spec))


def synth_exponential(cfg: WaveBankConfig, spec: SamplingSpec) -> TimeSeries:
    """``sum_i sin(2 pi w (1 + c exp(-r_i)) t + theta_i)``."""
    _expect(cfg, Mechanism.EXPONENTIAL)
    return synthesize(cfg, spec)


def synth_power(cfg: WaveBankConfig, spec: SamplingSpec) -> TimeSeries:
    """``sum_i sin(2 pi w (1 + c r_i^-alpha) t + theta_i)``.

    For ``alpha > 0`` the field is drawn on ``[max(lo, 1e-3), hi]``; any
    frequency above 0.9 Nyquist is redrawn.
    """
    _expect(cfg, Mechanism.POWER)
    return synthesize(cfg, spec)


def synth_resonance(cfg: WaveBankConfig, spec: SamplingSpec) -> TimeSeries:
    """``sum_i sin(2 pi R^-1(r_i) t + theta_i)`` with ``r_i`` clipped to the inverse's domain."""
    _expect(cfg, Mechanism.RESONANCE)
    return synthesize(cfg, spec)


def synth_ir_cascade(
    cfg: WaveBankConfig,
    spec: SamplingSpec,
    shift_lo: float | None = None,
    shift_hi: float | None = None,
) -> TimeSeries:
    """Single-generation cascade ``sum_i sin(2 pi (W - w_i) t)``, ``w_i`` log-uniform."""
    _expect(cfg, Mechanism.IR_CASCADE)
    if shift_lo is not None or shift_hi is not None:
        cfg = dataclasses.replace(
            cfg,
            shift_lo=cfg.shift_lo if shift_lo is None else shift_lo,
            shift_hi=cfg.shift_hi if shift_hi is None else shift_hi,
        )
    return synthesize(cfg, spec)


def synth_two_wave(omega: float, lambda_split: float, spec: SamplingSpec) -> TimeSeries:
    """``sin(2 pi (w + l) t) + sin(2 pi (w - l) t)``, which equals ``2 cos(2 pi l t) sin(2 pi w t)``.

    Frequencies are in Hz; requires ``w >= 10 l > 0``.
    """
    require_finite("synth_two_wave", omega, lambda_split)
    if not 0 < lambda_split or omega < 10 * lambda_split:
        raise ValueError("need omega >= 10 * lambda_split > 0")
    if omega + lambda_split > spec.nyquist_hz:
        raise ValueError("omega + lambda_split exceeds Nyquist")
    freqs = np.array([omega + lambda_split, omega - lambda_split])
    return TimeSeries(spec, superpose(freqs, None, spec))
