"""Numerical eigenpairs of ``-y'' + q y = lambda y`` on [0, pi].

Two independent routes are provided:

* shooting: an adaptive Dormand-Prince 8(5,3) integration from the left end,
  batched over many trial eigenvalues at once, with the boundary miss at
  the right end driven to zero by regula falsi;
* a centred finite-difference matrix whose eigenvalues are isolated by
  bisection on the Sturm sign count of its tridiagonal factorisation.

Robin data use the convention ``alpha0 * y + alpha1 * y' = rhs`` at both ends.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .core import Z_LEFT, Z_RIGHT, Potential, RobinBC
from .errors import BracketExhausted, GridMismatch, NoConvergence, StepFailure
from .rootfind import illinois_vectorized

log = logging.getLogger(__name__)

_SCAN_CHUNK = 48
_ZERO_TIE = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    n_points: int = 2001
    ivp_tol: float = 1e-10
    miss_tol: float = 1e-10
    lambda_scan: tuple[float, float, float] = (0.0, 60.0, 0.25)

    def __post_init__(self) -> None:
        lo, hi, step = self.lambda_scan
        if self.n_points < 11:
            raise ValueError("n_points must be at least 11")
        if not lo < hi:
            raise ValueError(f"lambda_scan requires lo < hi, got {self.lambda_scan}")
        if not step > 0:
            raise ValueError(f"lambda_scan step must be positive, got {step}")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(Z_LEFT, Z_RIGHT, self.n_points)

    def scan_values(self) -> np.ndarray:
        lo, hi, step = self.lambda_scan
        n = int(np.floor((hi - lo) / step + 1e-9))
        return lo + step * np.arange(n + 1)


@dataclass(frozen=True)
class ClosureCondition:
    """Third condition closing the slope-prescribed problem.

    ``unit_l2``: integral of y**2 over [0, pi] equals 1;
    ``left_value``: y(0) = gamma;  ``right_value``: y(pi) = gamma.
    """

    kind: Literal["unit_l2", "left_value", "right_value"] = "unit_l2"
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("unit_l2", "left_value", "right_value"):
            raise ValueError(f"unknown closure kind {self.kind!r}")
        if not np.isfinite(self.gamma):
            raise ValueError("closure gamma must be finite")

    @property
    def label(self) -> str:
        return self.kind if self.kind == "unit_l2" else f"{self.kind}({self.gamma:g})"


@dataclass(frozen=True)
class EigenPair:
    index: int
    lam: float
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    node_count: int


# ---------------------------------------------------------------- integration


def _integrate(potential: Potential, lams, y0, yp0, cfg: SolverConfig, dense: bool = False):
    """Integrate ``y'' = (q - lam) y`` for a batch of lambdas.

    ``y0``/``yp0`` broadcast against ``lams``.  Returns the right-end values
    ``(y, y')`` and, if ``dense``, samples of y (shape ``(m, n_points)``) and
    of y' on the configured grid.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    m = lams.size
    start = np.concatenate([np.broadcast_to(y0, (m,)), np.broadcast_to(yp0, (m,))]).astype(float)

    def rhs(t, state):
        return np.concatenate([state[m:], (potential(t) - lams) * state[:m]])

    # solve_ivp controls the RMS of the scaled error over the whole batch;
    # shrink the tolerance so every member meets ivp_tol on its own
    tol = cfg.ivp_tol / np.sqrt(2 * m)
    grid = cfg.grid if dense else None
    sol = solve_ivp(rhs, (Z_LEFT, Z_RIGHT), start, method="DOP853", rtol=tol, atol=tol, t_eval=grid)
    if not sol.success:
        raise StepFailure(f"IVP integration failed: {sol.message}")
    end = sol.y[:, -1]
    if dense:
        return end[:m], end[m:], sol.y[:m], sol.y[m:]
    return end[:m], end[m:]


def count_nodes(values) -> int:
    """Sign changes across the interior samples (the two endpoint samples are dropped).

    Samples within 1e-12*max|y| count as zero and are skipped.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise ValueError("need at least two samples")
    v = v[1:-1]
    if v.size == 0:
        return 0
    scale = np.max(np.abs(v))
    if scale == 0:
        return 0
    s = np.sign(np.where(np.abs(v) < _ZERO_TIE * scale, 0.0, v))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def shoot(potential: Potential, lam: float, init_value: float, init_slope: float, cfg: SolverConfig | None = None):
    """Integrate one initial value problem; return ``(y(pi), y'(pi), node_count)``."""
    cfg = cfg or SolverConfig()
    y, yp, ys, _ = _integrate(potential, [lam], init_value, init_slope, cfg, dense=True)
    return float(y[0]), float(yp[0]), count_nodes(ys[0])


def _normalise(grid: np.ndarray, values: np.ndarray) -> np.ndarray:
    norm = np.sqrt(np.trapezoid(values * values, grid))
    out = values / norm
    scale = np.max(np.abs(out))
    first = out[np.nonzero(np.abs(out) > 1e-8 * scale)[0][0]]
    return out if first > 0 else -out


def _scan_sign_changes(miss, scan: np.ndarray, wanted: int):
    """Walk the lambda scan in chunks until ``wanted`` sign changes are found."""
    brackets = []
    prev_l = prev_m = None
    for start in range(0, scan.size, _SCAN_CHUNK):
        ls = scan[start : start + _SCAN_CHUNK]
        ms = miss(ls)
        if prev_l is not None:
            ls = np.concatenate([[prev_l], ls])
            ms = np.concatenate([[prev_m], ms])
        for i in range(ls.size - 1):
            if ms[i] == 0 or ms[i] * ms[i + 1] < 0:
                brackets.append((ls[i], ls[i + 1], ms[i], ms[i + 1]))
                if len(brackets) >= wanted:
                    return brackets
        prev_l, prev_m = ls[-1], ms[-1]
    return brackets


def solve_robin_eigen(
    potential: Potential,
    left: RobinBC,
    right: RobinBC,
    k_max: int = 1,
    cfg: SolverConfig | None = None,
) -> list[EigenPair]:
    """Eigenpairs 0..k_max for homogeneous Robin conditions by shooting.

    The left initial data ``(y, y') = (-alpha1, alpha0)`` satisfy the left
    condition identically; the miss ``beta0 y(pi) + beta1 y'(pi)`` is then a
    function of lambda alone.
    """
    cfg = cfg or SolverConfig()
    if not (left.homogeneous and right.homogeneous):
        raise ValueError("eigenproblem boundary conditions must be homogeneous")
    y0, yp0 = -left.alpha1, left.alpha0

    def miss(lams):
        y, yp = _integrate(potential, lams, y0, yp0, cfg)
        return right.alpha0 * y + right.alpha1 * yp

    scan = cfg.scan_values()
    wanted = k_max + 1
    brackets = _scan_sign_changes(miss, scan, wanted)
    if len(brackets) < wanted:
        raise BracketExhausted(
            f"found {len(brackets)} of {wanted} eigenvalues in lambda scan "
            f"[{scan[0]:g}, {scan[-1]:g}] (step {cfg.lambda_scan[2]:g}); widen lambda_scan"
        )
    lo, hi, flo, fhi = (np.array(c, dtype=float) for c in zip(*brackets))
    lams = illinois_vectorized(miss, lo, hi, flo, fhi, xtol=cfg.miss_tol)

    grid = cfg.grid
    _, _, ys, _ = _integrate(potential, lams, y0, yp0, cfg, dense=True)
    pairs = []
    for lam, raw in zip(lams, ys):
        values = _normalise(grid, raw)
        pairs.append(EigenPair(index=count_nodes(values), lam=float(lam), grid=grid, values=values,
                               node_count=count_nodes(values)))
    found = [p.index for p in pairs]
    if found != list(range(wanted)):
        raise BracketExhausted(
            f"node counts {found} do not match indices 0..{k_max}; an eigenvalue lies below "
            f"lambda={scan[0]:g} or two eigenvalues share a scan cell"
        )
    return pairs


# -------------------------------------------------------- finite differences


def fd_tridiagonal(potential: Potential, left: RobinBC, right: RobinBC, N: int):
    """Diagonal and off-diagonal products of the FD operator on N intervals.

    Dirichlet ends are eliminated; Robin ends keep the boundary node and
    replace the ghost value through the centred boundary derivative.  The
    resulting matrix is similar to a symmetric tridiagonal matrix, so only
    the products ``a[i, i+1] * a[i+1, i]`` matter.
    Returns ``(z_nodes, diag, offprod)``.
    """
    if not (left.homogeneous and right.homogeneous):
        raise ValueError("eigenproblem boundary conditions must be homogeneous")
    z = np.linspace(Z_LEFT, Z_RIGHT, N + 1)
    h = z[1] - z[0]
    q = np.asarray(potential(z), dtype=float) * np.ones_like(z)
    inv_h2 = 1.0 / (h * h)
    diag = 2.0 * inv_h2 + q
    off = np.full(N, inv_h2 * inv_h2)
    first, last = 0, N
    if left.is_dirichlet:
        first = 1
    else:
        diag[0] = 2.0 * inv_h2 - 2.0 * left.alpha0 / (left.alpha1 * h) + q[0]
        off[0] = 2.0 * inv_h2 * inv_h2
    if right.is_dirichlet:
        last = N - 1
    else:
        diag[N] = 2.0 * inv_h2 + 2.0 * right.alpha0 / (right.alpha1 * h) + q[N]
        off[N - 1] = 2.0 * inv_h2 * inv_h2
    return z[first : last + 1], diag[first : last + 1], off[first:last]


def sturm_count(diag: np.ndarray, offprod: np.ndarray, x) -> np.ndarray:
    """Number of eigenvalues strictly below each entry of ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tiny = np.finfo(float).tiny ** 0.5
    count = np.zeros(x.shape, dtype=int)
    d = diag[0] - x
    d = np.where(d == 0, -tiny, d)
    count += d < 0
    for i in range(1, diag.size):
        d = diag[i] - x - offprod[i - 1] / d
        d = np.where(d == 0, -tiny, d)
        count += d < 0
    return count


def _multisection(diag, offprod, indices: Sequence[int], rtol: float = 4e-15, points: int = 31):
    radius = np.sqrt(offprod)
    rad = np.zeros_like(diag)
    rad[:-1] += radius
    rad[1:] += radius
    lo0, hi0 = float(np.min(diag - rad)), float(np.max(diag + rad))
    idx = np.asarray(indices)
    lo = np.full(idx.size, lo0)
    hi = np.full(idx.size, hi0)
    frac = np.arange(1, points + 1) / (points + 1)
    while True:
        width = hi - lo
        if np.all(width <= rtol * np.maximum(np.abs(lo) + np.abs(hi), 1.0)):
            return 0.5 * (lo + hi)
        xs = lo[:, None] + width[:, None] * frac[None, :]
        counts = sturm_count(diag, offprod, xs.ravel()).reshape(xs.shape)
        # eigenvalue j lies below x iff count(x) > j
        above = counts > idx[:, None]
        first_above = np.where(above.any(axis=1), above.argmax(axis=1), points)
        new_hi = np.where(first_above < points, xs[np.arange(idx.size), np.minimum(first_above, points - 1)], hi)
        new_lo = np.where(first_above > 0, xs[np.arange(idx.size), np.maximum(first_above - 1, 0)], lo)
        lo, hi = new_lo, new_hi


def solve_fd_matrix(potential: Potential, left: RobinBC, right: RobinBC, k_max: int = 1, N: int = 4000) -> list[float]:
    """Lowest k_max+1 eigenvalues of the centred FD operator (Sturm bisection)."""
    _, diag, offprod = fd_tridiagonal(potential, left, right, N)
    return [float(v) for v in _multisection(diag, offprod, range(k_max + 1))]


def discrete_residual(potential: Potential, pair: EigenPair) -> float:
    """Max interior residual of ``-D2 y + q y - lambda y`` with a five-point D2."""
    z, y = pair.grid, pair.values
    h = z[1] - z[0]
    d2 = (-y[:-4] + 16 * y[1:-3] - 30 * y[2:-2] + 16 * y[3:-1] - y[4:]) / (12 * h * h)
    zi = z[2:-2]
    res = -d2 + np.asarray(potential(zi)) * y[2:-2] - pair.lam * y[2:-2]
    return float(np.max(np.abs(res)))


def orthogonality(e_i: EigenPair, e_j: EigenPair) -> float:
    if e_i.grid.shape != e_j.grid.shape or not np.array_equal(e_i.grid, e_j.grid):
        raise GridMismatch("eigenfunctions are sampled on different grids")
    return float(np.trapezoid(e_i.values * e_j.values, e_i.grid))


# ------------------------------------------------------ slope-prescribed mode


def _slope_setup(potential, s0, s1, closure: ClosureCondition, cfg: SolverConfig):
    grid = cfg.grid
    dense = closure.kind == "unit_l2"

    def fundamental(lams):
        # first half: (y, y')(0) = (1, 0); second half: (0, s0)
        lams = np.atleast_1d(np.asarray(lams, dtype=float))
        m = lams.size
        both = np.concatenate([lams, lams])
        y0 = np.concatenate([np.ones(m), np.zeros(m)])
        yp0 = np.concatenate([np.zeros(m), np.full(m, float(s0))])
        return m, _integrate(potential, both, y0, yp0, cfg, dense=dense)

    def closure_residual(A, m, out):
        if closure.kind == "unit_l2":
            ys = out[2]
            prof = A[:, None] * ys[:m] + ys[m:]
            return np.trapezoid(prof * prof, grid, axis=1) - 1.0
        if closure.kind == "left_value":
            return A - closure.gamma
        return A * out[0][:m] + out[0][m:] - closure.gamma

    def residuals(A, lams):
        """Residual pair ``[y'(pi) - s1, closure]`` for y(0)=A, y'(0)=s0."""
        A = np.atleast_1d(np.asarray(A, dtype=float))
        m, out = fundamental(lams)
        r1 = A * out[1][:m] + out[1][m:] - s1
        return r1, closure_residual(A, m, out)

    def reduced(lams):
        """Closure residual once y(0) is solved from the right slope condition.

        Also returns that y(0) and ``y_a'(pi)``, whose zeros are poles of y(0).
        """
        m, out = fundamental(lams)
        ypa = out[1][:m]
        with np.errstate(divide="ignore", invalid="ignore"):
            A = (s1 - out[1][m:]) / ypa
            r = closure_residual(A, m, out)
        return r, A, ypa

    return residuals, reduced


def slope_solutions(
    potential: Potential,
    s0: float,
    s1: float,
    closure: ClosureCondition,
    cfg: SolverConfig | None = None,
    count: int = 2,
    newton_tol: float = 1e-10,
) -> list[EigenPair]:
    """The first ``count`` solutions (ascending lambda) of the slope-prescribed problem.

    Seeds come from sign changes of the reduced closure residual over the
    lambda scan; each seed is polished by damped Newton on the unknowns
    ``(y(0), lambda)`` with a forward-difference Jacobian.
    """
    cfg = cfg or SolverConfig()
    residuals, reduced = _slope_setup(potential, s0, s1, closure, cfg)
    scan = cfg.scan_values()
    seeds: list[tuple[float, float]] = []
    prev = None
    for start in range(0, scan.size, _SCAN_CHUNK):
        ls = scan[start : start + _SCAN_CHUNK]
        r, A, ypa = reduced(ls)
        if prev is not None:
            ls, r, A, ypa = (np.concatenate([[p], v]) for p, v in zip(prev, (ls, r, A, ypa)))
        for i in range(ls.size - 1):
            if not (np.isfinite(r[i]) and np.isfinite(r[i + 1])):
                continue
            if ypa[i] * ypa[i + 1] < 0:
                continue  # pole of y(0) inside the cell, not a root
            if r[i] * r[i + 1] < 0 or r[i] == 0:
                seeds.append((ls[i], ls[i + 1]))
        prev = (ls[-1], r[-1], A[-1], ypa[-1])
        if len(seeds) >= count:
            break
    seeds = seeds[:count]
    if len(seeds) < count:
        raise NoConvergence(
            f"found {len(seeds)} of {count} slope-mode solutions for closure {closure.label} "
            f"in lambda scan [{scan[0]:g}, {scan[-1]:g}]"
        )
    pairs = []
    for idx, (a, b) in enumerate(seeds):
        lam, A = _polish_seed(residuals, reduced, a, b, newton_tol)
        _, _, ys, _ = _integrate(potential, [lam, lam], [A, 0.0], [0.0, s0], cfg, dense=True)
        values = ys[0] + ys[1]
        pairs.append(EigenPair(index=idx, lam=float(lam), grid=cfg.grid, values=values, node_count=count_nodes(values)))
    return pairs


def _polish_seed(residuals, reduced, a: float, b: float, tol: float, maxiter: int = 50):
    # narrow the seed bracket a little before handing over to Newton
    ra = reduced([a])[0][0]
    for _ in range(12):
        mid = 0.5 * (a + b)
        rm = reduced([mid])[0][0]
        if ra * rm <= 0:
            b = mid
        else:
            a, ra = mid, rm
    lam = 0.5 * (a + b)
    A = float(reduced([lam])[1][0])
    x = np.array([A, lam])
    r = np.array([v[0] for v in residuals([x[0]], [x[1]])])
    for _ in range(maxiter):
        norm = np.linalg.norm(r)
        if norm < tol:
            return x[1], x[0]
        hA = 1e-7 * max(1.0, abs(x[0]))
        hl = 1e-7 * max(1.0, abs(x[1]))
        As = np.array([x[0] + hA, x[0]])
        ls = np.array([x[1], x[1] + hl])
        r1, r2 = residuals(As, ls)
        jac = np.array([[(r1[0] - r[0]) / hA, (r1[1] - r[0]) / hl], [(r2[0] - r[1]) / hA, (r2[1] - r[1]) / hl]])
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular Jacobian at {x}") from exc
        t = 1.0
        while t > 1e-4:
            xn = x + t * step
            rn = np.array([v[0] for v in residuals([xn[0]], [xn[1]])])
            if np.linalg.norm(rn) < norm:
                x, r = xn, rn
                break
            t *= 0.5
        else:
            break
    if np.linalg.norm(r) < max(tol, 1e-8):
        return x[1], x[0]
    raise NoConvergence(f"damped Newton stalled at lambda={x[1]:.6g}, y(0)={x[0]:.6g}, residual {np.linalg.norm(r):.3e}")


def solve_slope_normalized(
    potential: Potential,
    s0: float,
    s1: float,
    closure: ClosureCondition | None = None,
    cfg: SolverConfig | None = None,
    index: int = 0,
) -> EigenPair:
    """Solution ``index`` (ascending lambda) with ``y'(0)=s0``, ``y'(pi)=s1`` and the closure."""
    closure = closure or ClosureCondition()
    return slope_solutions(potential, s0, s1, closure, cfg, count=index + 1)[index]
