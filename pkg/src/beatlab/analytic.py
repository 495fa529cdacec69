"""Frequency distributions, beat-frequency distributions and resonance geometry.

Synchronization laws map a constant time density ``p`` onto a frequency
density ``P(w) = p |dw/dt|^-1``.  The beat density of a pair drawn from
``P`` is ``Q(d) = int_{w1}^{w2} P(w + d) P(w) dw``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import quadrature
from .core import ConvergenceError, require_finite

QUAD_RTOL = 1e-8
# Fraction of the resonance-inverse domain below which t is treated as 0+.
T_MIN_FRACTION = 1e-12


@dataclass(frozen=True)
class ExpSyncParams:
    p: float = 1.0
    lam: float = 1.0
    omega1: float = 1e-4
    omega2: float = 1e5

    def __post_init__(self):
        require_finite("ExpSyncParams", self.p, self.lam, self.omega1, self.omega2)
        if self.p <= 0 or self.lam <= 0:
            raise ValueError("p and lam must be positive")
        if not 0 < self.omega1 <= self.omega2:
            raise ValueError("need 0 < omega1 <= omega2")


@dataclass(frozen=True)
class PowerSyncParams:
    p: float = 1.0
    alpha: float = 3.0
    omega1: float = 1e-4
    omega2: float = 1e5

    def __post_init__(self):
        require_finite("PowerSyncParams", self.p, self.alpha, self.omega1, self.omega2)
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if self.p <= 0:
            raise ValueError("p must be positive")
        if not 0 < self.omega1 <= self.omega2:
            raise ValueError("need 0 < omega1 <= omega2")

    @property
    def c(self) -> float:
        """Prefactor ``p / alpha``; negative when ``alpha < 0``."""
        return self.p / self.alpha

    @property
    def beta(self) -> float:
        return 1.0 + 1.0 / self.alpha


@dataclass(frozen=True)
class ResonanceParams:
    omega0: float = 10.0
    kappa: float = 0.1
    p: float = 1.0

    def __post_init__(self):
        require_finite("ResonanceParams", self.omega0, self.kappa, self.p)
        if self.omega0 <= 0 or self.kappa <= 0 or self.p <= 0:
            raise ValueError("omega0, kappa and p must be positive")

    @property
    def peak(self) -> float:
        """Maximum of the resonance curve, ``4 / kappa**2``."""
        return 4.0 / self.kappa**2

    @property
    def t_min(self) -> float:
        return T_MIN_FRACTION * self.peak


def _positive(name: str, x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} must be finite")
    if np.any(x <= 0):
        raise ValueError(f"{name} must be positive")
    return x


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def p_exp(omega, params: ExpSyncParams):
    """Frequency density of the exponential approach: ``p / (lam * omega)``."""
    omega = _positive("omega", omega)
    return _out(params.p / (params.lam * omega))


def q_exp(delta, params: ExpSyncParams):
    """Closed-form beat density of the exponential approach.

    ``Q(d) = p^2 / (lam^2 d) * ln[w2 (w1 + d) / (w1 (w2 + d))]``
    """
    delta = _positive("delta", delta)
    w1, w2 = params.omega1, params.omega2
    # log1p keeps precision when d << w1 or d << w2
    log_term = np.log1p(delta / w1) - np.log1p(delta / w2)
    return _out(params.p**2 / (params.lam**2 * delta) * log_term)


def p_pow(omega, params: PowerSyncParams, signed: bool = False):
    """Frequency density of the power approach: ``|c| * omega**-beta``.

    With ``alpha < 0`` the prefactor ``c = p/alpha`` is negative; the
    magnitude is returned unless ``signed`` is set.
    """
    omega = _positive("omega", omega)
    c = params.c if signed else abs(params.c)
    return _out(c * omega ** (-params.beta))


def beat_quadrature_oracle(
    P: Callable, delta: float, lo: float, hi: float, rtol: float = QUAD_RTOL
) -> float:
    """Adaptive quadrature of ``int_lo^hi P(w + delta) P(w) dw``."""
    require_finite("beat_quadrature_oracle bounds", delta, lo, hi)
    if lo == hi:
        return 0.0

    def integrand(w):
        return np.asarray(P(w + delta), dtype=float) * np.asarray(P(w), dtype=float)

    value, _ = quadrature.integrate(integrand, lo, hi, rtol=rtol)
    return value


def q_pow(delta, params: PowerSyncParams):
    """Beat density of the power approach, by adaptive quadrature."""
    deltas = _positive("delta", delta)
    if params.omega1 == params.omega2:
        return _out(np.zeros_like(deltas))
    vals = np.array([
        beat_quadrature_oracle(lambda w: p_pow(w, params), float(d), params.omega1, params.omega2)
        for d in np.atleast_1d(deltas).ravel()
    ])
    return _out(vals.reshape(deltas.shape))


def q_pow_asymptotic_exponent(alpha: float) -> float:
    """Exponent ``-1 - 2/alpha`` quoted for small ``omega1`` and small ``delta``."""
    return -1.0 - 2.0 / alpha


def resonance_curve(omega, params: ResonanceParams):
    """Lorentzian ``1 / ((kappa/2)^2 + (omega - omega0)^2)``."""
    omega = np.asarray(omega, dtype=float)
    if not np.all(np.isfinite(omega)):
        raise ValueError("omega must be finite")
    return _out(1.0 / ((params.kappa / 2.0) ** 2 + (omega - params.omega0) ** 2))


def resonance_inverse(t, params: ResonanceParams):
    """Upper branch of the inverse resonance curve.

    ``omega = sqrt(-t (kappa^2 t - 4)) / (2 t) + omega0`` for ``0 < t <= 4/kappa^2``.
    """
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t <= 0) or np.any(t > params.peak):
        raise ValueError(f"t must lie in (0, {params.peak!r}]")
    radicand = np.maximum(-t * (params.kappa**2 * t - 4.0), 0.0)
    return _out(np.sqrt(radicand) / (2.0 * t) + params.omega0)


def p_resonance(omega, params: ResonanceParams):
    """Frequency density induced by the resonance inverse (odd about omega0)."""
    omega = np.asarray(omega, dtype=float)
    if not np.all(np.isfinite(omega)):
        raise ValueError("omega must be finite")
    x = omega - params.omega0
    return _out(32.0 * params.p * x / (params.kappa**2 + 4.0 * x * x) ** 2)


def _log_omega_curvature(t: np.ndarray, params: ResonanceParams) -> np.ndarray:
    # u = omega - omega0 = sqrt(4/t - kappa^2)/2 and its t-derivatives
    u = 0.5 * np.sqrt(4.0 / t - params.kappa**2)
    du = -1.0 / (2.0 * t**2 * u)
    d2u = 1.0 / (t**3 * u) - 1.0 / (4.0 * t**4 * u**3)
    w = params.omega0 + u
    return d2u / w - (du / w) ** 2


@dataclass(frozen=True)
class ExpApprox:
    """Exponential ``A exp(-B t)`` tangent to ``ln omega(t)`` at ``t_star``."""

    A: float
    B: float
    t_star: float

    def __call__(self, t):
        return self.A * np.exp(-self.B * np.asarray(t, dtype=float))


def exp_approx_at_inflection(params: ResonanceParams, grid_points: int = 4001) -> ExpApprox:
    """Tangent exponential to the resonance inverse at its log-linear inflection point.

    The inflection ``t*`` is where ``d^2 ln omega / dt^2`` changes sign; it is
    bracketed on a log-spaced grid and refined by bisection to ``1e-9``
    relative.  ``B = -d ln omega / dt`` at ``t*`` (central difference,
    relative step ``1e-6``) and ``A = omega(t*) exp(B t*)``.
    """
    t_hi = params.peak * (1.0 - 1e-6)
    grid = np.geomspace(params.t_min, t_hi, grid_points)
    curv = _log_omega_curvature(grid, params)
    flips = np.nonzero(np.sign(curv[:-1]) * np.sign(curv[1:]) < 0)[0]
    if flips.size == 0:
        raise ConvergenceError(
            f"no inflection of ln omega(t) in ({params.t_min!r}, {t_hi!r}); "
            f"curvature ranges {curv.min()!r}..{curv.max()!r}"
        )
    a, b = grid[flips[0]], grid[flips[0] + 1]
    fa = _log_omega_curvature(np.array(a), params)
    while (b - a) > 1e-9 * b:
        m = 0.5 * (a + b)
        fm = _log_omega_curvature(np.array(m), params)
        if np.sign(fm) == np.sign(fa):
            a, fa = m, fm
        else:
            b = m
    t_star = 0.5 * (a + b)
    h = 1e-6 * t_star
    slope = (
        math.log(resonance_inverse(t_star + h, params))
        - math.log(resonance_inverse(t_star - h, params))
    ) / (2.0 * h)
    B = -slope
    A = resonance_inverse(t_star, params) * math.exp(B * t_star)
    return ExpApprox(A=float(A), B=float(B), t_star=float(t_star))


def local_loglog_slope(fn: Callable, x1: float, x2: float) -> float:
    """Secant slope of ``ln fn`` against ``ln x`` between two points."""
    y1, y2 = fn(x1), fn(x2)
    if y1 <= 0 or y2 <= 0:
        warnings.warn("non-positive value in log-log slope", RuntimeWarning)
        return float("nan")
    return math.log(y2 / y1) / math.log(x2 / x1)
