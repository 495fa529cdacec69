"""Named experiment presets and the pipeline that runs them.

A wave-bank run is ``synthesize -> demodulate -> periodogram -> fit``; an
analytic run evaluates a closed-form or quadrature curve.  Each run writes
plot-ready CSV files plus ``fit.json`` into its own directory.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import analytic, demod, spectral, synth
from .analytic import ExpSyncParams, PowerSyncParams, ResonanceParams
from .core import RandomField, SamplingSpec, TimeSeries, derive_seed, make_uniform_field
from .demod import DemodKind, DemodSpec
from .spectral import FitConfig
from .synth import Mechanism, PhaseMode, WaveBankConfig

CANONICAL_SEED = 14
BASE_SPEC = SamplingSpec(100.0, 250_000)
LOW_EDGE_BINS = 4


class Status(enum.IntEnum):
    OK = 0
    EXPECTATION_FAILED = 1
    ERROR = 2


@dataclass(frozen=True)
class Expectation:
    """What a run must show.  Unset fields are not checked."""

    citation: str
    slope: float | None = None
    tolerance: float | None = None
    pink: bool | None = None
    positive_slope: bool = False
    min_decades: float | None = None
    max_deviation: float | None = None
    label: str | None = None

    def check(self, result: dict) -> list[str]:
        failures = []
        slope = result.get("slope")
        if self.slope is not None:
            if slope is None or not abs(slope - self.slope) <= self.tolerance:
                failures.append(f"slope {slope!r} not within {self.slope} +- {self.tolerance}")
        if self.positive_slope and not (slope is not None and slope > 0):
            failures.append(f"slope {slope!r} is not positive")
        if self.pink is not None and result.get("pink") is not self.pink:
            failures.append(f"pink verdict {result.get('pink')!r}, expected {self.pink}")
        if self.min_decades is not None and not result.get("decades", 0.0) >= self.min_decades:
            failures.append(f"band spans {result.get('decades')!r} < {self.min_decades} decades")
        if self.max_deviation is not None and not result.get("max_deviation", math.inf) <= self.max_deviation:
            failures.append(f"deviation {result.get('max_deviation')!r} > {self.max_deviation}")
        return failures

    def summary(self) -> str:
        if self.label:
            return self.label
        parts = []
        if self.slope is not None:
            parts.append(f"slope {self.slope:+.3g}+-{self.tolerance:g}")
        if self.positive_slope:
            parts.append("slope>0")
        if self.pink is not None:
            parts.append("pink" if self.pink else "not pink")
        if self.min_decades is not None:
            parts.append(f">={self.min_decades:g} decades")
        if self.max_deviation is not None:
            parts.append(f"deviation<={self.max_deviation:g}")
        return " & ".join(parts)


@dataclass(frozen=True)
class BankRun:
    """Everything needed to reproduce one wave-bank pipeline."""

    bank: WaveBankConfig
    sampling: SamplingSpec
    demod: tuple[DemodSpec, ...]
    fit: FitConfig


def default_band(cfg: WaveBankConfig, sampling: SamplingSpec) -> tuple[float, float]:
    """Fit band ``[4/T, top]`` where ``top`` bounds the bank's beat frequencies."""
    lo = LOW_EDGE_BINS / sampling.duration_s
    fid = max(cfg.fiducials)
    m = cfg.mechanism
    if m is Mechanism.EXPONENTIAL:
        hi = fid * abs(cfg.mixing)
    elif m is Mechanism.POWER:
        r_hi = cfg.field.range_hi
        if cfg.alpha < 0:
            hi = min(fid / 4, fid * abs(cfg.mixing) * r_hi ** (-cfg.alpha))
        else:
            hi = fid / 4
    elif m is Mechanism.RESONANCE:
        hi = cfg.resonance.omega0 / 4
    elif m is Mechanism.IR_CASCADE:
        hi = min(cfg.shift_hi - cfg.shift_lo, fid / 4)
    else:
        hi = fid / 4
    return lo, min(hi, sampling.nyquist_hz)


def exp_bank(seed: int, num_waves: int = 1000, phases: PhaseMode = PhaseMode.ZERO,
             fiducial: float | tuple[float, ...] = 10.0) -> WaveBankConfig:
    return WaveBankConfig(
        Mechanism.EXPONENTIAL, fiducial, 0.2, RandomField(seed, 0.0, 30.0, num_waves), phases
    )


SQ = DemodSpec(DemodKind.SQUARE)


def _bank_run(bank: WaveBankConfig, sampling: SamplingSpec = BASE_SPEC,
              chain: tuple[DemodSpec, ...] = (SQ,), band: tuple[float, float] | None = None) -> BankRun:
    lo, hi = band if band is not None else default_band(bank, sampling)
    return BankRun(bank, sampling, chain, FitConfig(lo, hi))


# ----------------------------------------------------------------------------
# results and output files


def _echo(obj: Any) -> Any:
    """JSON-friendly parameter echo of dataclasses, enums and arrays."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _echo(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (list, tuple)):
        return [_echo(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _echo(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(columns: dict[str, np.ndarray], header: list[str]) -> str:
    names = list(columns)
    cols = [np.asarray(columns[n], dtype=float) for n in names]
    lines = [f"# {h}" for h in header]
    lines.append(",".join(names))
    fmt = ",".join(["%.12g"] * len(cols))
    rows = np.column_stack(cols)
    lines.extend(fmt % tuple(r) for r in rows.tolist())
    return "\n".join(lines) + "\n"


@dataclass
class RunResult:
    name: str
    seed: int | None
    result: dict
    expectation: Expectation | None
    failures: list[str]
    runtime_s: float = 0.0

    @property
    def status(self) -> Status:
        return Status.EXPECTATION_FAILED if self.failures else Status.OK

    @property
    def passed(self) -> bool:
        return not self.failures


def _header(name: str, seed: int | None, params: dict) -> list[str]:
    return [
        f"preset: {name}",
        f"seed: {seed}",
        "params: " + json.dumps(params, sort_keys=True),
    ]


def write_outputs(out_dir: Path, name: str, seed: int | None, params: dict,
                  result: dict, expectation: Expectation | None, failures: list[str],
                  tables: dict[str, dict[str, np.ndarray]],
                  plot_script: bool = False) -> None:
    header = _header(name, seed, params)
    for fname, columns in tables.items():
        _atomic_write(out_dir / fname, _csv(columns, header))
    doc = {
        "preset": name,
        "seed": seed,
        "params": params,
        **result,
        "expected": None if expectation is None else expectation.summary(),
        "citation": None if expectation is None else expectation.citation,
        "pass": not failures,
        "failures": failures,
    }
    _atomic_write(out_dir / "fit.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if plot_script:
        _atomic_write(out_dir / "plot.gp", _gnuplot_script(tables))


def _gnuplot_script(tables: dict[str, dict[str, np.ndarray]]) -> str:
    lines = ["set datafile separator ','", "set datafile commentschars '#'", "set key autotitle columnhead"]
    for fname, cols in tables.items():
        x, *ys = list(cols)
        logscale = "set logscale xy" if fname in ("psd.csv", "curve.csv") else "unset logscale"
        lines += [
            "set terminal pngcairo size 900,600",
            f"set output '{fname[:-4]}.png'",
            logscale,
            "plot " + ", ".join(f"'{fname}' using 1:{j + 2} with lines" for j in range(len(ys))),
        ]
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# runners


def execute_bank(run: BankRun) -> tuple[TimeSeries, spectral.Psd, spectral.SlopeFit, spectral.Verdict]:
    raw = synth.synthesize(run.bank, run.sampling)
    y = demod.apply_chain(raw, run.demod)
    psd, fit, verdict = spectral.analyze(y, run.fit)
    return y, psd, fit, verdict


def _fit_result(fit: spectral.SlopeFit, verdict: spectral.Verdict) -> dict:
    return {
        "slope": fit.slope,
        "slope_stderr": fit.slope_stderr,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "band_hz": [fit.band_lo_hz, fit.band_hi_hz],
        "decades": fit.decades,
        "points_used": fit.points_used,
        "pink": verdict.is_pink,
        "verdict_rationale": verdict.rationale(),
    }


def run_bank(name: str, seed: int | None, run: BankRun, expectation: Expectation | None,
             out_dir: Path | None, plot_script: bool = False) -> RunResult:
    y, psd, fit, verdict = execute_bank(run)
    result = _fit_result(fit, verdict)
    result["demod"] = [d.label() for d in run.demod]
    failures = expectation.check(result) if expectation else []
    if out_dir is not None:
        tables = {
            "series.csv": {"t": y.times(), "value": y.samples},
            "psd.csv": {"freq_hz": psd.freqs_hz, "power": psd.power},
        }
        write_outputs(out_dir, name, seed, _echo(run), result, expectation, failures, tables, plot_script)
    return RunResult(name, seed, result, expectation, failures)


# Analytic curves -------------------------------------------------------------

ASYMPTOTIC_BAND = (1e1, 1e3)


def _curve_slope(fn: Callable, band=ASYMPTOTIC_BAND) -> float:
    return analytic.local_loglog_slope(fn, *band)


def run_fig1(out_dir: Path | None, expectation: Expectation, plot_script: bool = False) -> RunResult:
    deltas = np.geomspace(1e-8, 1e5, 131)
    curves = {}
    for w1 in (1e-4, 1e-6):
        params = ExpSyncParams(1.0, 1.0, w1, 1e5)
        curves[f"Q_omega1_{w1:g}"] = analytic.q_exp(deltas, params)
    fid = ExpSyncParams(1.0, 1.0, 1e-4, 1e5)
    result = {
        "slope": _curve_slope(lambda d: analytic.q_exp(d, fid)),
        "slope_band": list(ASYMPTOTIC_BAND),
    }
    failures = expectation.check(result)
    if out_dir is not None:
        write_outputs(out_dir, "fig1", None, _echo({"params": [fid, dataclasses.replace(fid, omega1=1e-6)]}),
                      result, expectation, failures, {"curve.csv": {"delta": deltas, **curves}}, plot_script)
    return RunResult("fig1", None, result, expectation, failures)


def run_fig5(out_dir: Path | None, expectation: Expectation, plot_script: bool = False) -> RunResult:
    deltas = np.geomspace(1e-6, 1e4, 61)
    params = {3.0: PowerSyncParams(1.0, 3.0, 1e-4, 1e5), 5.0: PowerSyncParams(1.0, 5.0, 1e-4, 1e5)}
    curves = {f"Q_beta_{p.beta:.3g}": analytic.q_pow(deltas, p) for p in params.values()}
    main = params[3.0]
    result = {
        "slope": _curve_slope(lambda d: analytic.q_pow(d, main)),
        "slope_band": list(ASYMPTOTIC_BAND),
        "beta": main.beta,
        "quoted_exponent": analytic.q_pow_asymptotic_exponent(main.alpha),
    }
    failures = expectation.check(result)
    if out_dir is not None:
        write_outputs(out_dir, "fig5", None, _echo({"params": list(params.values())}),
                      result, expectation, failures, {"curve.csv": {"delta": deltas, **curves}}, plot_script)
    return RunResult("fig5", None, result, expectation, failures)


def exp_approx_deviation(params: ResonanceParams, approx: analytic.ExpApprox,
                         lo: float, hi: float, points: int = 2001) -> float:
    t = np.linspace(lo, hi, points)
    ln_w = np.log(analytic.resonance_inverse(t, params))
    return float(np.max(np.abs(np.log(approx.A) - approx.B * t - ln_w) / np.abs(ln_w)))


def run_fig8(out_dir: Path | None, expectation: Expectation, plot_script: bool = False) -> RunResult:
    params = ResonanceParams(10.0, 0.1)
    approx = analytic.exp_approx_at_inflection(params)
    peak = params.peak
    result = {
        "A": approx.A,
        "B": approx.B,
        "t_star": approx.t_star,
        "max_deviation": exp_approx_deviation(params, approx, peak / 2, peak),
        "deviation_range": [peak / 2, peak],
    }
    failures = expectation.check(result)
    if out_dir is not None:
        t = np.geomspace(params.t_min * 1e6, peak, 400)
        tables = {"curve.csv": {"t": t, "omega": analytic.resonance_inverse(t, params), "exp_approx": approx(t)}}
        write_outputs(out_dir, "fig8", None, _echo(params), result, expectation, failures, tables, plot_script)
    return RunResult("fig8", None, result, expectation, failures)


TWO_WAVE = dict(omega=10.0, lambda_split=0.5, sampling=SamplingSpec(100.0, 20_000))


def two_wave_checks(omega: float, lambda_split: float, sampling: SamplingSpec) -> dict:
    """Locate the beat line of the squared two-wave signal and the raw signal's level there."""
    x = synth.synth_two_wave(omega, lambda_split, sampling)
    raw = spectral.periodogram(x, spectral.Window.HANN)
    sq = spectral.periodogram(demod.square(x), spectral.Window.HANN)
    df = sampling.sample_rate_hz / sampling.num_samples
    sub = sq.freqs_hz < omega - lambda_split - 2 * df
    k = int(np.argmax(np.where(sub, sq.power, -np.inf)))
    beat = 2 * lambda_split
    near = np.abs(raw.freqs_hz - beat) <= 2 * df
    raw_peak = float(raw.power.max())
    return {
        "squared_peak_hz": float(sq.freqs_hz[k]),
        "expected_peak_hz": beat,
        "bin_width_hz": df,
        "peak_offset_bins": abs(float(sq.freqs_hz[k]) - beat) / df,
        "raw_relative_power_at_beat": float(raw.power[near].max() / raw_peak),
        "_series": x,
        "_psd": sq,
    }


def run_two_wave(out_dir: Path | None, expectation: Expectation, plot_script: bool = False) -> RunResult:
    res = two_wave_checks(**TWO_WAVE)
    x, psd = res.pop("_series"), res.pop("_psd")
    failures = expectation.check(res)
    if res["peak_offset_bins"] > 1:
        failures.append(f"squared peak at {res['squared_peak_hz']} Hz, expected {res['expected_peak_hz']}")
    if res["raw_relative_power_at_beat"] > 1e-12:
        failures.append("raw superposition has power at the beat frequency")
    if out_dir is not None:
        tables = {"series.csv": {"t": x.times(), "value": x.samples},
                  "psd.csv": {"freq_hz": psd.freqs_hz, "power": psd.power}}
        write_outputs(out_dir, "twowave", None, _echo(TWO_WAVE), res, expectation, failures, tables, plot_script)
    return RunResult("twowave", None, res, expectation, failures)


# ----------------------------------------------------------------------------
# preset table


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    description: str
    expected: Expectation | None
    build: Callable[[int], BankRun] | None = None
    analytic_runner: Callable | None = None
    seed: int = CANONICAL_SEED

    @property
    def stochastic(self) -> bool:
        return self.build is not None


def _case13(seed: int) -> BankRun:
    fids = tuple(make_uniform_field(derive_seed(seed, 13), 0.0, 20.0, 5).tolist())
    bank = exp_bank(seed, 1000, fiducial=fids)
    return _bank_run(bank, band=(LOW_EDGE_BINS / BASE_SPEC.duration_s, 2.0))


def _power(seed: int, alpha: float, mixing: float, r_hi: float, sampling: SamplingSpec) -> BankRun:
    bank = WaveBankConfig(Mechanism.POWER, 440.0, mixing, RandomField(seed, 0.0, r_hi, 200), alpha=alpha)
    return _bank_run(bank, sampling)


def _resonance(seed: int) -> BankRun:
    bank = WaveBankConfig(Mechanism.RESONANCE, 10.0, 0.0, RandomField(seed, 0.0, 10.0, 100),
                          resonance=ResonanceParams(10.0, 0.1))
    return _bank_run(bank)


def _ircascade(seed: int) -> BankRun:
    bank = WaveBankConfig(Mechanism.IR_CASCADE, 10.0, 0.0, RandomField(seed, 0.0, 1.0, 1000),
                          shift_lo=1e-3, shift_hi=2.0)
    return _bank_run(bank)


def _chain(*steps: DemodSpec) -> tuple[DemodSpec, ...]:
    return tuple(steps)


SEGMENT_LENGTH = 10


def _segments(kind: DemodKind) -> DemodSpec:
    return DemodSpec(kind, segments=BASE_SPEC.num_samples // SEGMENT_LENGTH)


def _slope(value: float, citation: str, tol: float = 0.25, **kw) -> Expectation:
    return Expectation(citation, slope=value, tolerance=tol, **kw)


def _presets() -> dict[str, ExperimentPreset]:
    p: list[ExperimentPreset] = [
        ExperimentPreset("fig1", "beat density Q of the exponential approach (closed form)",
                         _slope(-1.0, "reported: Q falls as 1/delta up to a slow log factor", 0.1),
                         analytic_runner=run_fig1),
        ExperimentPreset("fig2", "exponential bank, w=10, c=0.2, r in [0,30], 1000 waves, squared",
                         _slope(-1.0, "reported: index -1 across four decades", 0.2, pink=True, min_decades=3.0),
                         build=lambda s: _bank_run(exp_bank(s))),
        ExperimentPreset("fig3", "as fig2 with uniformly random phases",
                         _slope(-0.7, "reported: random phases lower the index to about -0.7", 0.2, pink=True),
                         build=lambda s: _bank_run(exp_bank(s, phases=PhaseMode.UNIFORM_RANDOM))),
        ExperimentPreset("fig4", "as fig2 without squaring (raw signal)",
                         Expectation("reported: no pink spectrum without demodulation", pink=False),
                         build=lambda s: _bank_run(exp_bank(s), chain=())),
        ExperimentPreset("fig5", "beat density Q of the power approach (quadrature), alpha=3 and 5",
                         _slope(analytic.q_pow_asymptotic_exponent(3.0),
                                "reported: Q scales as delta^(-1-2/alpha) at small omega1, delta", 0.15),
                         analytic_runner=run_fig5),
        ExperimentPreset("fig6", "power bank, alpha=3, w=440, c=0.3, r in [0,20], 200 waves, squared",
                         _slope(-1.3, "reported: index -1.3"),
                         build=lambda s: _power(s, 3.0, 0.3, 20.0, SamplingSpec(4096.0, 2**19))),
        ExperimentPreset("fig7", "power bank, alpha=-3, w=440, c=0.01, r in [0,1], 200 waves, squared",
                         _slope(-1.0, "reported: index -1 across three decades"),
                         build=lambda s: _power(s, -3.0, 0.01, 1.0, SamplingSpec(1024.0, 2**20))),
        ExperimentPreset("fig8", "tangent exponential at the inflection of the resonance inverse",
                         Expectation("reported: tangent exponential follows omega(t) at large t", max_deviation=0.05),
                         analytic_runner=run_fig8),
        ExperimentPreset("fig9", "resonance bank, kappa=0.1, W=10, r in [0,10], 100 waves, squared",
                         _slope(-1.2, "reported: roughly a power law, index -1.2"),
                         build=_resonance),
        ExperimentPreset("case1", "fiducial: fig2 configuration",
                         _slope(-1.0, "reported: slope -1.0"),
                         build=lambda s: _bank_run(exp_bank(s))),
        ExperimentPreset("case2", "squared signal, values below the mean set to zero",
                         _slope(-1.0, "reported: slope -1.0"),
                         build=lambda s: _bank_run(exp_bank(s), chain=_chain(SQ, DemodSpec(DemodKind.THRESHOLD_KEEP_ABOVE_MEAN)))),
        ExperimentPreset("case3", "squared signal, on/off at the mean",
                         _slope(-0.94, "reported: slope -0.94"),
                         build=lambda s: _bank_run(exp_bank(s), chain=_chain(SQ, DemodSpec(DemodKind.BINARY_ABOVE_MEAN)))),
        ExperimentPreset("case4", "squared signal, inverse on/off at the mean",
                         _slope(-0.94, "reported: slope -0.94, identical to case3"),
                         build=lambda s: _bank_run(exp_bank(s), chain=_chain(SQ, DemodSpec(DemodKind.BINARY_BELOW_MEAN)))),
        ExperimentPreset("case5", "raw signal, values below the mean set to zero",
                         _slope(-0.98, "reported: slope -0.98"),
                         build=lambda s: _bank_run(exp_bank(s), chain=_chain(DemodSpec(DemodKind.THRESHOLD_RAW_ABOVE_MEAN)))),
        ExperimentPreset("case6", "raw signal, half-wave rectified",
                         _slope(-1.2, "reported: slope -1.2"),
                         build=lambda s: _bank_run(exp_bank(s), chain=_chain(DemodSpec(DemodKind.HALF_WAVE_RECTIFY)))),
        ExperimentPreset("case7", "raw signal, RMS over segments of 10 samples",
                         _slope(-1.1, "reported: slope -1.1"),
                         build=lambda s: _bank_run(exp_bank(s), chain=_chain(_segments(DemodKind.SEGMENT_QUADRATIC_MEAN)))),
        ExperimentPreset("case8", "raw signal, plain mean over segments of 10 samples",
                         Expectation("reported: not pink, positive index near +0.8",
                                     pink=False, positive_slope=True),
                         build=lambda s: _bank_run(exp_bank(s), chain=_chain(_segments(DemodKind.SEGMENT_MEAN)))),
        ExperimentPreset("case9", "squared signal decimated by 2",
                         _slope(-1.1, "reported: nearly pink, slope -1.1"),
                         build=lambda s: _bank_run(exp_bank(s), chain=_chain(SQ, DemodSpec(DemodKind.DECIMATE, factor=2)))),
        ExperimentPreset("case10", "10 waves instead of 1000",
                         Expectation("reported: not pink with so few waves", pink=False),
                         build=lambda s: _bank_run(exp_bank(s, num_waves=10))),
        ExperimentPreset("case11", "10^4 waves instead of 1000",
                         _slope(-0.94, "reported: slope -0.94"),
                         build=lambda s: _bank_run(exp_bank(s, num_waves=10_000))),
        ExperimentPreset("case12", "record ten times longer",
                         _slope(-1.0, "reported: slope -1.0, power law one decade longer", min_decades=4.0),
                         build=lambda s: _bank_run(exp_bank(s), SamplingSpec(100.0, 10 * BASE_SPEC.num_samples))),
        ExperimentPreset("case13", "5 fiducial frequencies drawn from [0, 20], 200 waves each",
                         _slope(-1.5, "reported: slope -1.5"),
                         build=_case13),
        ExperimentPreset("twowave", "two waves w +- l: beat at 2l only after squaring",
                         Expectation("reported: the square shows the beat at 2*lambda",
                                     label="peak at 2*lambda only after squaring"),
                         analytic_runner=run_two_wave),
        ExperimentPreset("ircascade", "cascade W - w_i with w_i log-uniform on [1e-3, 2], 1000 waves, squared",
                         Expectation("reported: behaves like the exponential approach", pink=True),
                         build=_ircascade),
    ]
    return {preset.name: preset for preset in p}


PRESETS = _presets()


def get_preset(name: str) -> ExperimentPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def run_preset(name: str, seed: int | None = None, out_dir: Path | None = None,
               plot_script: bool = False) -> RunResult:
    preset = get_preset(name)
    start = time.perf_counter()
    target = None if out_dir is None else Path(out_dir) / name
    if preset.stochastic:
        s = preset.seed if seed is None else int(seed)
        res = run_bank(name, s, preset.build(s), preset.expected, target, plot_script)
    else:
        res = preset.analytic_runner(target, preset.expected, plot_script)
    res.runtime_s = time.perf_counter() - start
    return res


SUMMARY_COLUMNS = ("preset", "seed", "slope", "expected", "pass", "failures")


def run_all(out_dir: Path, names: list[str] | None = None, plot_script: bool = False) -> list[RunResult]:
    """Run every preset with its canonical seed.

    ``summary.csv`` holds only deterministic columns; wall-clock times go to
    ``timings.csv``.
    """
    out_dir = Path(out_dir)
    results = [run_preset(n, None, out_dir, plot_script) for n in (names or list(PRESETS))]
    lines = [",".join(SUMMARY_COLUMNS)]
    for r in results:
        slope = r.result.get("slope")
        lines.append(",".join([
            r.name,
            "" if r.seed is None else str(r.seed),
            "" if slope is None else f"{slope:.6f}",
            _quote(r.expectation.summary() if r.expectation else ""),
            "pass" if r.passed else "FAIL",
            _quote("; ".join(r.failures)),
        ]))
    _atomic_write(out_dir / "summary.csv", "\n".join(lines) + "\n")
    timing = ["preset,runtime_s"] + [f"{r.name},{r.runtime_s:.3f}" for r in results]
    _atomic_write(out_dir / "timings.csv", "\n".join(timing) + "\n")
    return results


def _quote(text: str) -> str:
    if any(c in text for c in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text
