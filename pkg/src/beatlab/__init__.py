"""Pink noise from the beats of wave banks whose frequencies crowd around a carrier."""

from .core import (
    BeatlabError,
    ConvergenceError,
    Psd,
    RandomField,
    SamplingSpec,
    SlopeFit,
    TimeSeries,
)
from .analytic import (
    ExpApprox,
    ExpSyncParams,
    PowerSyncParams,
    ResonanceParams,
    beat_quadrature_oracle,
    exp_approx_at_inflection,
    p_exp,
    p_pow,
    p_resonance,
    q_exp,
    q_pow,
    resonance_curve,
    resonance_inverse,
)
from .synth import Mechanism, PhaseMode, WaveBankConfig, synthesize, synth_two_wave
from .demod import DemodKind, DemodSpec
from .spectral import FitConfig, Verdict, analyze, fit_slope, log_bin, periodogram, pink_verdict
from .experiment import PRESETS, run_all, run_preset

__version__ = "0.1.0"
