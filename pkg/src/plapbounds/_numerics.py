"""Small numerical helpers: golden-section maximization and guarded quadrature."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import ConvergenceError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

QUAD_RTOL = 1e-10
QUAD_ATOL = 1e-14


def safe_eval(fun: Callable[[float], float], x: float, default: float = -math.inf) -> float:
    try:
        val = float(fun(x))
    except (OverflowError, ZeroDivisionError, ValueError):
        return default
    if math.isnan(val):
        return default
    return val


def golden_max(fun, lo, hi, xtol=1e-12, max_iter=300):
    """Golden-section search for a maximum of ``fun`` on ``[lo, hi]``.

    Returns ``(x, fun(x))``. Assumes unimodality on the bracket; callers
    guard against multiple maxima with :func:`scan_max`.
    """
    a, b = float(lo), float(hi)
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1 = safe_eval(fun, x1)
    f2 = safe_eval(fun, x2)
    tol = xtol * max(1.0, abs(a), abs(b))
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = safe_eval(fun, x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = safe_eval(fun, x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def scan_max(fun, grid, xtol=1e-12, n_starts=5):
    """Maximize ``fun`` over the hull of ``grid``.

    The grid is scanned, then golden-section refinement runs around the
    ``n_starts`` best local maxima of the scan. Endpoints are candidates too,
    so a supremum attained at the boundary is returned as such.
    """
    xs = np.unique(np.asarray(grid, dtype=float))
    vals = np.array([safe_eval(fun, x) for x in xs])
    n = len(xs)
    peaks = [
        i for i in range(n)
        if (i == 0 or vals[i] >= vals[i - 1]) and (i == n - 1 or vals[i] >= vals[i + 1])
    ]
    peaks.sort(key=lambda i: -vals[i])
    best_x, best_v = xs[int(np.argmax(vals))], float(np.max(vals))
    for i in peaks[:n_starts]:
        lo = xs[max(i - 1, 0)]
        hi = xs[min(i + 1, n - 1)]
        if hi <= lo:
            continue
        x, v = golden_max(fun, lo, hi, xtol=xtol)
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v


def quad(fun, a, b, rtol=QUAD_RTOL):
    """Adaptive Gauss-Kronrod integral of ``fun`` over ``[a, b]`` (``b`` may be inf)."""
    if b == a:
        return 0.0
    val, err, info = integrate.quad(
        fun, a, b, epsabs=QUAD_ATOL, epsrel=rtol, limit=500, full_output=True
    )[:3]
    if err > max(QUAD_ATOL, 1e3 * rtol * abs(val)):
        raise ConvergenceError(
            f"quadrature on [{a}, {b}] did not converge (estimate {val}, error {err})"
        )
    return float(val)
