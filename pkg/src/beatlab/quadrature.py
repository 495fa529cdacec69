"""Globally adaptive Gauss-Kronrod (7/15) quadrature.

Integrands spanning many decades (``1/w`` near a small lower bound) are
handled by seeding the panel list with log-spaced breakpoints before
adaptive bisection starts.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable

import numpy as np

from .core import ConvergenceError

# 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights;
# every odd-indexed node is also a 7-point Gauss node.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_W = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_W = np.zeros(15)
GAUSS_W[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
    except (TypeError, ValueError):
        pass
    return np.array([float(f(v)) for v in x])


def _panel(f: Callable, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * NODES
    y = _evaluate(f, x)
    if not np.all(np.isfinite(y)):
        raise ConvergenceError(f"integrand not finite on [{a!r}, {b!r}]")
    kron = half * float(KRONROD_W @ y)
    gauss = half * float(GAUSS_W @ y)
    return kron, abs(kron - gauss)


def initial_breakpoints(lo: float, hi: float, per_decade: int = 4) -> np.ndarray:
    """Panel edges for ``[lo, hi]``: log-spaced when ``lo > 0`` and the range spans a decade."""
    if lo > 0 and hi / lo > 10.0:
        n = max(2, int(math.ceil(per_decade * math.log10(hi / lo))) + 1)
        pts = np.geomspace(lo, hi, n)
        pts[0], pts[-1] = lo, hi
        return pts
    return np.array([lo, hi], dtype=float)


def integrate(
    f: Callable,
    lo: float,
    hi: float,
    rtol: float = 1e-8,
    atol: float = 1e-300,
    max_panels: int = 20_000,
    breakpoints: np.ndarray | None = None,
) -> tuple[float, float]:
    """Integrate ``f`` over ``[lo, hi]``; returns ``(value, error_estimate)``.

    ``f`` may be vectorized over numpy arrays or scalar-only.

    Raises
    ------
    ConvergenceError
        If the error estimate does not fall below ``max(rtol*|I|, atol)``
        within ``max_panels`` panels.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("integration bounds must be finite")
    if lo == hi:
        return 0.0, 0.0
    if hi < lo:
        value, err = integrate(f, hi, lo, rtol, atol, max_panels, breakpoints)
        return -value, err

    pts = initial_breakpoints(lo, hi) if breakpoints is None else np.asarray(breakpoints, float)
    heap: list[tuple[float, float, float, float]] = []
    total = 0.0
    err_total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        v, e = _panel(f, a, b)
        total += v
        err_total += e
        heapq.heappush(heap, (-e, a, b, v))

    while err_total > max(rtol * abs(total), atol):
        if len(heap) >= max_panels:
            raise ConvergenceError(
                f"quadrature did not converge: estimate {total!r} +- {err_total!r} "
                f"after {len(heap)} panels"
            )
        neg_e, a, b, v = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not a < mid < b:
            raise ConvergenceError(f"panel [{a!r}, {b!r}] cannot be split further")
        v1, e1 = _panel(f, a, mid)
        v2, e2 = _panel(f, mid, b)
        total += v1 + v2 - v
        err_total += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, a, mid, v1))
        heapq.heappush(heap, (-e2, mid, b, v2))

    # re-sum to shed the drift of the running updates
    total = math.fsum(item[3] for item in heap)
    err_total = math.fsum(-item[0] for item in heap)
    return total, err_total
