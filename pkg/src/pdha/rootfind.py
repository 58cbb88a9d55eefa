"""Bracketed scalar root finders."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import NoConvergence


def safeguarded_newton(
    f: Callable[[float], float],
    df: Callable[[float], float],
    lo: float,
    hi: float,
    ftol: float = 1e-12,
    maxiter: int = 100,
) -> float:
    """Newton's method kept inside a sign-change bracket.

    A Newton step that leaves the current bracket (or a zero derivative) is
    replaced by a bisection step.  Stops once ``|f| < ftol`` or the bracket
    collapses to a few ulps.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = f(x)
        if abs(fx) < ftol:
            return x
        if np.sign(fx) == np.sign(flo):
            lo, flo = x, fx
        else:
            hi = x
        dfx = df(x)
        step_ok = dfx != 0 and np.isfinite(dfx)
        if step_ok:
            xn = x - fx / dfx
            step_ok = lo < xn < hi
        x = xn if step_ok else 0.5 * (lo + hi)
        if hi - lo <= 4 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0):
            return x
    fx = f(x)
    if abs(fx) < ftol:
        return x
    raise NoConvergence(f"Newton stalled at x={x} with |f|={abs(fx):.3e}")


def illinois_vectorized(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    flo: np.ndarray,
    fhi: np.ndarray,
    xtol: float,
    maxiter: int = 100,
) -> np.ndarray:
    """Illinois (modified regula falsi) on many brackets at once.

    ``f`` maps an array of abscissae to an array of values, so every bracket
    advances with a single batched evaluation per iteration.  Converged
    brackets are held fixed.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = np.array(flo, dtype=float)
    fhi = np.array(fhi, dtype=float)
    x = 0.5 * (lo + hi)
    side = np.zeros(lo.shape, dtype=int)
    done = (flo == 0) | (fhi == 0)
    x = np.where(flo == 0, lo, np.where(fhi == 0, hi, x))
    for _ in range(maxiter):
        if done.all():
            return x
        denom = fhi - flo
        xs = np.where(denom != 0, hi - fhi * (hi - lo) / np.where(denom != 0, denom, 1.0), 0.5 * (lo + hi))
        bad = ~((xs > lo) & (xs < hi))
        xs = np.where(bad, 0.5 * (lo + hi), xs)
        xs = np.where(done, x, xs)
        fx = np.asarray(f(xs), dtype=float)
        step = np.abs(xs - x)
        x = np.where(done, x, xs)
        hit = (fx == 0) & ~done
        same_as_hi = np.sign(fx) == np.sign(fhi)
        upd_hi = same_as_hi & ~done & ~hit
        upd_lo = ~same_as_hi & ~done & ~hit
        # Illinois: halve the stale endpoint value when the same side moves twice
        flo = np.where(upd_hi & (side == 1), 0.5 * flo, flo)
        fhi = np.where(upd_lo & (side == -1), 0.5 * fhi, fhi)
        hi = np.where(upd_hi, xs, hi)
        fhi = np.where(upd_hi, fx, fhi)
        lo = np.where(upd_lo, xs, lo)
        flo = np.where(upd_lo, fx, flo)
        side = np.where(upd_hi, 1, np.where(upd_lo, -1, side))
        width = hi - lo
        done = done | hit | (width <= xtol * (1.0 + np.abs(x))) | (step <= xtol * (1.0 + np.abs(x)))
    if done.all():
        return x
    raise NoConvergence(f"regula falsi did not converge; widths {hi - lo}")
