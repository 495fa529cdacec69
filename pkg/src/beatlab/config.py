"""Custom-run configuration files.

The format is INI-like text read with :mod:`configparser`.  Keys may sit in
sections (``[bank]`` then ``mixing = 0.2``) or be written flat with a dotted
prefix (``bank.mixing = 0.2``); both spellings flatten to ``bank.mixing``.
Anything left out takes the fig2 value, so a file holding only
``bank.mechanism = exponential`` reproduces fig2.

Example::

    name = alpha5
    seed = 7
    [bank]
    mechanism = power
    fiducial_hz = 440
    mixing = 0.3
    alpha = 5
    num_waves = 200
    range_hi = 20
    [sampling]
    sample_rate_hz = 4096
    num_samples = 524288
    [demod]
    chain = square
    [fit]
    band_hi_hz = 110
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .analytic import ResonanceParams
from .core import BeatlabError, RandomField, SamplingSpec
from .demod import DemodKind, DemodSpec, Quadratic
from .experiment import BASE_SPEC, CANONICAL_SEED, BankRun, Expectation, default_band
from .spectral import Detrend, FitConfig, Window
from .synth import Mechanism, PhaseMode, WaveBankConfig

_TOP = "run"


class ConfigError(BeatlabError, ValueError):
    """Schema violations, one ``field: message`` entry per problem."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid config:\n  " + "\n  ".join(self.problems))


def _enum(cls):
    def parse(text: str):
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"expected one of {', '.join(m.value for m in cls)}") from None
    return parse


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected true or false")


def _int(text: str) -> int:
    return int(text.strip())


def _floats(text: str) -> tuple[float, ...]:
    vals = tuple(float(v) for v in text.split(",") if v.strip())
    if not vals:
        raise ValueError("expected at least one number")
    return vals


def _chain(text: str) -> tuple[DemodKind, ...]:
    parse = _enum(DemodKind)
    return tuple(parse(v) for v in text.split(",") if v.strip())


SCHEMA: dict[str, Callable[[str], object]] = {
    "run.name": str.strip,
    "run.seed": _int,
    "bank.mechanism": _enum(Mechanism),
    "bank.fiducial_hz": _floats,
    "bank.mixing": float,
    "bank.num_waves": _int,
    "bank.range_lo": float,
    "bank.range_hi": float,
    "bank.phase_mode": _enum(PhaseMode),
    "bank.alpha": float,
    "resonance.omega0": float,
    "resonance.kappa": float,
    "cascade.shift_lo": float,
    "cascade.shift_hi": float,
    "sampling.sample_rate_hz": float,
    "sampling.num_samples": _int,
    "demod.chain": _chain,
    "demod.segments": _int,
    "demod.factor": _int,
    "demod.quadratic": _enum(Quadratic),
    "fit.band_lo_hz": float,
    "fit.band_hi_hz": float,
    "fit.bins_per_decade": _int,
    "fit.window": _enum(Window),
    "fit.detrend": _enum(Detrend),
    "expect.slope": float,
    "expect.tolerance": float,
    "expect.pink": _bool,
}


def read_flat(text: str) -> dict[str, str]:
    """Flatten sectioned or dotted keys into ``section.key`` strings."""
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    parser.optionxform = str.lower
    try:
        parser.read_string(f"[{_TOP}]\n" + text)
    except configparser.Error as exc:
        raise ConfigError([f"syntax: {exc.message if hasattr(exc, 'message') else exc}"]) from None
    flat: dict[str, str] = {}
    problems = []
    for section in parser.sections():
        for key, value in parser.items(section):
            name = key if (section == _TOP and "." in key) else f"{section.lower()}.{key}"
            if name in flat:
                problems.append(f"{name}: given more than once")
            flat[name] = value
    if problems:
        raise ConfigError(problems)
    return flat


@dataclass(frozen=True)
class CustomRun:
    name: str
    seed: int
    run: BankRun
    expectation: Expectation | None


def parse_config(text: str) -> CustomRun:
    flat = read_flat(text)
    problems: list[str] = []
    values: dict[str, object] = {}
    for key, raw in flat.items():
        if key not in SCHEMA:
            problems.append(f"{key}: unknown field")
            continue
        try:
            values[key] = SCHEMA[key](raw)
        except ValueError as exc:
            problems.append(f"{key}: {exc} (got {raw!r})")
    if problems:
        raise ConfigError(problems)
    return _build(values)


def load_config(path: str | Path) -> CustomRun:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"file: cannot read {path}: {exc.strerror}"]) from None
    return parse_config(text)


def _check(problems: list[str], field: str, fn: Callable[[], object]):
    try:
        return fn()
    except (ValueError, TypeError) as exc:
        problems.append(f"{field}: {exc}")
        return None


def _build(v: dict[str, object]) -> CustomRun:
    problems: list[str] = []
    mech = v.get("bank.mechanism", Mechanism.EXPONENTIAL)
    seed = v.get("run.seed", CANONICAL_SEED)

    if mech is Mechanism.TWO_WAVE:
        problems.append("bank.mechanism: two_wave has its own preset 'twowave' and is not a bank")
    if "bank.alpha" in v and mech is not Mechanism.POWER:
        problems.append("bank.alpha: only applies to mechanism=power")
    if mech is Mechanism.POWER:
        if "bank.alpha" not in v:
            problems.append("bank.alpha: required for mechanism=power")
        elif v["bank.alpha"] == 0:
            problems.append("bank.alpha: must be nonzero")
    for key in ("resonance.omega0", "resonance.kappa"):
        if key in v and mech is not Mechanism.RESONANCE:
            problems.append(f"{key}: only applies to mechanism=resonance")
    for key in ("cascade.shift_lo", "cascade.shift_hi"):
        if key in v and mech is not Mechanism.IR_CASCADE:
            problems.append(f"{key}: only applies to mechanism=ir_cascade")
    if problems:
        raise ConfigError(problems)

    field = _check(problems, "bank", lambda: RandomField(
        seed, v.get("bank.range_lo", 0.0), v.get("bank.range_hi", 30.0), v.get("bank.num_waves", 1000)))
    resonance = None
    if mech is Mechanism.RESONANCE:
        resonance = _check(problems, "resonance", lambda: ResonanceParams(
            v.get("resonance.omega0", 10.0), v.get("resonance.kappa", 0.1)))
    fids = v.get("bank.fiducial_hz", (10.0,))
    bank = None
    if field is not None and not problems:
        bank = _check(problems, "bank", lambda: WaveBankConfig(
            mech,
            fids if len(fids) > 1 else fids[0],
            v.get("bank.mixing", 0.2),
            field,
            v.get("bank.phase_mode", PhaseMode.ZERO),
            alpha=v.get("bank.alpha"),
            resonance=resonance,
            shift_lo=v.get("cascade.shift_lo", 1e-3) if mech is Mechanism.IR_CASCADE else None,
            shift_hi=v.get("cascade.shift_hi", 2.0) if mech is Mechanism.IR_CASCADE else None,
        ))
    sampling = _check(problems, "sampling", lambda: SamplingSpec(
        v.get("sampling.sample_rate_hz", BASE_SPEC.sample_rate_hz),
        v.get("sampling.num_samples", BASE_SPEC.num_samples)))
    chain = _demod_chain(v, problems)
    if problems or bank is None or sampling is None:
        raise ConfigError(problems or ["bank: invalid"])

    lo, hi = default_band(bank, sampling)
    fit = _check(problems, "fit", lambda: FitConfig(
        v.get("fit.band_lo_hz", lo),
        v.get("fit.band_hi_hz", hi),
        v.get("fit.bins_per_decade", 8),
        v.get("fit.detrend", Detrend.SUBTRACT_MEAN),
        v.get("fit.window", Window.HANN),
    ))
    if fit is not None:
        rate, n = sampling.sample_rate_hz, sampling.num_samples
        for step in chain:
            if step.kind is DemodKind.DECIMATE:
                rate, n = rate / step.factor, -(-n // step.factor)
            elif step.segments is not None:
                if step.segments > n:
                    problems.append(f"demod.segments: {step.segments} exceeds the {n} samples available")
                    break
                rate, n = rate / (n // step.segments), step.segments
        if fit.band_hi_hz > rate / 2:
            problems.append(f"fit.band_hi_hz: {fit.band_hi_hz!r} exceeds the Nyquist frequency {rate / 2!r} Hz")
    expectation = None
    if "expect.slope" in v or "expect.pink" in v:
        if "expect.slope" in v and "expect.tolerance" not in v:
            problems.append("expect.tolerance: required with expect.slope")
        expectation = Expectation("user config", slope=v.get("expect.slope"),
                                  tolerance=v.get("expect.tolerance"), pink=v.get("expect.pink"))
    if problems:
        raise ConfigError(problems)
    name = v.get("run.name", "custom")
    if not name or any(c in name for c in "/\\") or name.startswith("."):
        raise ConfigError([f"run.name: {name!r} is not a usable directory name"])
    return CustomRun(name, seed, BankRun(bank, sampling, chain, fit), expectation)


def _demod_chain(v: dict[str, object], problems: list[str]) -> tuple[DemodSpec, ...]:
    kinds = v.get("demod.chain", (DemodKind.SQUARE,))
    segments, factor = v.get("demod.segments"), v.get("demod.factor")
    quadratic = v.get("demod.quadratic", Quadratic.RMS)
    steps = []
    used_seg = used_fac = False
    for kind in kinds:
        seg = fac = None
        if kind in (DemodKind.SEGMENT_MEAN, DemodKind.SEGMENT_QUADRATIC_MEAN):
            seg, used_seg = segments, True
        elif kind is DemodKind.DECIMATE:
            fac, used_fac = factor, True
        step = _check(problems, "demod.chain", lambda: DemodSpec(kind, seg, fac, quadratic))
        if step is not None:
            steps.append(step)
    if segments is not None and not used_seg:
        problems.append("demod.segments: no segment step in demod.chain")
    if factor is not None and not used_fac:
        problems.append("demod.factor: no decimate step in demod.chain")
    return tuple(steps)
