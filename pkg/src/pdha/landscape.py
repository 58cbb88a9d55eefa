"""Closed-form landscape function for ``q(z) = c_hat / (z + b_hat)**2``.

The landscape function solves ``-w'' + q w = 1`` on [0, pi].  For the
inverse-square potential the homogeneous solutions are powers
``(z + b_hat)**phi`` with ``phi**2 - phi - c_hat = 0`` and a particular
solution is ``(z + b_hat)**2 / (c_hat - 2)``, so

    w(z) = C1 (z + b_hat)**phi1 + C2 (z + b_hat)**phi2 + (z + b_hat)**2 / (c_hat - 2).

The lowest eigenvalue is then estimated as ``1.25 / max w``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.linalg import solve_banded

from .core import Z_LEFT, Z_RIGHT, Potential, RobinBC
from .errors import (
    DomainError,
    NonPositiveLandscape,
    ResonantCase,
    SingularSystem,
    UnsolvableBoundaryData,
    ZeroExponent,
)
from .rootfind import safeguarded_newton

log = logging.getLogger(__name__)

BCKind = Literal["dirichlet", "neumann", "robin"]

ESTIMATE_FACTOR = 1.25
CRITICAL_SCAN_POINTS = 2001
_SINGULAR_RTOL = 1e-12


def _check_params(b_hat: float, c_hat: float) -> None:
    if not b_hat > 0:
        raise DomainError(f"b_hat must be positive, got {b_hat}")
    if c_hat < 0:
        raise DomainError(f"c_hat must be nonnegative, got {c_hat}")
    if c_hat == 2:
        raise ResonantCase("c_hat = 2 makes the particular solution (z+b)^2/(c-2) singular")


def characteristic_exponents(c_hat: float) -> tuple[float, float]:
    if c_hat < 0:
        raise DomainError(f"c_hat must be nonnegative, got {c_hat}")
    root = math.sqrt(1.0 + 4.0 * c_hat)
    return 0.5 * (1.0 + root), 0.5 * (1.0 - root)


def _robin_system(b_hat, c_hat, left: RobinBC, right: RobinBC):
    """Matrix and right-hand side of the 2x2 system for (C1, C2)."""
    p1, p2 = characteristic_exponents(c_hat)
    b, e = b_hat, Z_RIGHT + b_hat
    a0, a1, w0 = left.alpha0, left.alpha1, left.rhs
    be0, be1, w1 = right.alpha0, right.alpha1, right.rhs
    m = np.array(
        [
            [b**p1 * (a0 + a1 * p1 / b), b**p2 * (a0 + a1 * p2 / b)],
            [e**p1 * (be0 + be1 * p1 / e), e**p2 * (be0 + be1 * p2 / e)],
        ]
    )
    rhs = np.array([w0, w1]) + np.array([b * (a0 * b + 2 * a1), e * (be0 * e + 2 * be1)]) / (2.0 - c_hat)
    return m, rhs


def robin_closed_form(b_hat: float, c_hat: float, left: RobinBC, right: RobinBC) -> tuple[float, float]:
    """C1 = Chat1 / Chat and C2 = Chat2 / Chat written out term by term."""
    _check_params(b_hat, c_hat)
    p1, p2 = characteristic_exponents(c_hat)
    b, e = b_hat, Z_RIGHT + b_hat
    a0, a1, w0 = left.alpha0, left.alpha1, left.rhs
    be0, be1, w1 = right.alpha0, right.alpha1, right.rhs
    g = 2.0 - c_hat
    left_data = w0 * g + b * (a0 * b + 2 * a1)
    right_data = w1 * g + e * (be0 * e + 2 * be1)
    l1, l2 = a0 + a1 * p1 / b, a0 + a1 * p2 / b
    r1, r2 = be0 + be1 * p1 / e, be0 + be1 * p2 / e
    chat1 = left_data * e**p2 * r2 - b**p2 * l2 * right_data
    chat2 = b**p1 * l1 * right_data - e**p1 * r1 * left_data
    chat = g * (b**p1 * e**p2 * l1 * r2 - b**p2 * e**p1 * l2 * r1)
    scale = abs(g) * (abs(b**p1 * e**p2 * l1 * r2) + abs(b**p2 * e**p1 * l2 * r1))
    if scale == 0 or abs(chat) <= _SINGULAR_RTOL * scale:
        raise UnsolvableBoundaryData(f"Robin system is singular (|Chat|={abs(chat):.3e})")
    return chat1 / chat, chat2 / chat


def solve_coefficients_robin(b_hat: float, c_hat: float, left: RobinBC, right: RobinBC) -> tuple[float, float]:
    """Solve the 2x2 boundary system directly; the closed form is cross-checked."""
    _check_params(b_hat, c_hat)
    m, rhs = _robin_system(b_hat, c_hat, left, right)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = abs(m[0, 0] * m[1, 1]) + abs(m[0, 1] * m[1, 0])
    if scale == 0 or abs(det) <= _SINGULAR_RTOL * scale:
        raise UnsolvableBoundaryData(
            f"boundary data admit no landscape function (det={det:.3e}, b_hat={b_hat}, c_hat={c_hat})"
        )
    c1, c2 = np.linalg.solve(m, rhs)
    k1, k2 = robin_closed_form(b_hat, c_hat, left, right)
    ref = max(abs(c1), abs(c2), abs(k1), abs(k2))
    if ref > 0 and max(abs(c1 - k1), abs(c2 - k2)) > 1e-9 * ref:
        log.warning("closed-form and direct Robin coefficients disagree: %r vs %r", (k1, k2), (c1, c2))
    return float(c1), float(c2)


def coefficients_dirichlet(b_hat: float, c_hat: float, w0_hat: float = 0.0, w1_hat: float = 0.0) -> tuple[float, float]:
    _check_params(b_hat, c_hat)
    p1, p2 = characteristic_exponents(c_hat)
    b, e = b_hat, Z_RIGHT + b_hat
    g = 2.0 - c_hat
    den = b**p1 * e**p2 - b**p2 * e**p1
    if abs(den) <= _SINGULAR_RTOL * (abs(b**p1 * e**p2) + abs(b**p2 * e**p1)):
        raise UnsolvableBoundaryData("Dirichlet denominator vanishes")
    c1 = ((w0_hat * g + b**2) * e**p2 - b**p2 * (w1_hat * g + e**2)) / (g * den)
    c2 = (b**p1 * (w1_hat * g + e**2) - e**p1 * (w0_hat * g + b**2)) / (g * den)
    return c1, c2


def coefficients_neumann(b_hat: float, c_hat: float, s0: float = 1.0, s1: float = -1.0) -> tuple[float, float]:
    """Coefficients for prescribed slopes ``w'(0) = s0`` and ``w'(pi) = s1``."""
    _check_params(b_hat, c_hat)
    p1, p2 = characteristic_exponents(c_hat)
    if p2 == 0:
        raise ZeroExponent("c_hat = 0 gives phi2 = 0 and the Neumann formula divides by it")
    b, e = b_hat, Z_RIGHT + b_hat
    g = 2.0 - c_hat
    den = b ** (p1 - 1) * e ** (p2 - 1) - b ** (p2 - 1) * e ** (p1 - 1)
    if abs(den) <= _SINGULAR_RTOL * (abs(b ** (p1 - 1) * e ** (p2 - 1)) + abs(b ** (p2 - 1) * e ** (p1 - 1))):
        raise UnsolvableBoundaryData("Neumann denominator vanishes")
    c1 = ((s0 * g + 2 * b) * e ** (p2 - 1) - b ** (p2 - 1) * (s1 * g + 2 * e)) / (p1 * g * den)
    c2 = (b ** (p1 - 1) * (s1 * g + 2 * e) - e ** (p1 - 1) * (s0 * g + 2 * b)) / (p2 * g * den)
    return c1, c2


def _bc_kind(left: RobinBC, right: RobinBC) -> BCKind:
    if left.is_dirichlet and right.is_dirichlet:
        return "dirichlet"
    if left.is_neumann and right.is_neumann:
        return "neumann"
    return "robin"


@dataclass(frozen=True)
class ClosedFormLandscape:
    b_hat: float
    c_hat: float
    phi1: float
    phi2: float
    C1: float
    C2: float
    bc_kind: BCKind

    def value(self, zhat):
        s = np.asarray(zhat, dtype=float) + self.b_hat
        out = self.C1 * s**self.phi1 + self.C2 * s**self.phi2 + s**2 / (self.c_hat - 2.0)
        return float(out) if out.ndim == 0 else out

    def derivative(self, zhat):
        s = np.asarray(zhat, dtype=float) + self.b_hat
        out = (
            self.C1 * self.phi1 * s ** (self.phi1 - 1)
            + self.C2 * self.phi2 * s ** (self.phi2 - 1)
            + 2.0 * s / (self.c_hat - 2.0)
        )
        return float(out) if out.ndim == 0 else out

    def second_derivative(self, zhat):
        s = np.asarray(zhat, dtype=float) + self.b_hat
        out = (
            self.C1 * self.phi1 * (self.phi1 - 1) * s ** (self.phi1 - 2)
            + self.C2 * self.phi2 * (self.phi2 - 1) * s ** (self.phi2 - 2)
            + 2.0 / (self.c_hat - 2.0)
        )
        return float(out) if out.ndim == 0 else out

    def potential(self, zhat):
        return self.c_hat / (np.asarray(zhat, dtype=float) + self.b_hat) ** 2

    def ode_residual(self, zhat):
        """``-w'' + q w - 1`` evaluated with the analytic second derivative."""
        return -self.second_derivative(zhat) + self.potential(zhat) * self.value(zhat) - 1.0


def build_landscape(b_hat: float, c_hat: float, left: RobinBC, right: RobinBC) -> ClosedFormLandscape:
    c1, c2 = solve_coefficients_robin(b_hat, c_hat, left, right)
    p1, p2 = characteristic_exponents(c_hat)
    return ClosedFormLandscape(b_hat, c_hat, p1, p2, c1, c2, _bc_kind(left, right))


def landscape_eval(sol: ClosedFormLandscape, zhat):
    return sol.value(zhat)


def landscape_derivative(sol: ClosedFormLandscape, zhat):
    return sol.derivative(zhat)


def critical_points(sol: ClosedFormLandscape) -> list[float]:
    """Interior zeros of w', located by a grid scan and refined by Newton.

    Returns an empty list when w is monotone on [0, pi].
    """
    grid = np.linspace(Z_LEFT, Z_RIGHT, CRITICAL_SCAN_POINTS)
    dw = sol.derivative(grid)
    roots: list[float] = []
    for i in range(1, len(grid) - 1):
        if dw[i] == 0:
            roots.append(float(grid[i]))
    sign = np.sign(dw)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for i in idx:
        r = safeguarded_newton(sol.derivative, sol.second_derivative, grid[i], grid[i + 1], ftol=1e-12)
        if Z_LEFT < r < Z_RIGHT:
            roots.append(float(r))
    return sorted(roots)


@dataclass(frozen=True)
class EstimateResult:
    z_star: float
    w_max: float
    W_min: float
    lambda0_est: float


def estimate_lambda0(sol: ClosedFormLandscape) -> EstimateResult:
    candidates = [Z_LEFT, Z_RIGHT, *critical_points(sol)]
    values = [sol.value(z) for z in candidates]
    i = int(np.argmax(values))
    w_max = values[i]
    if not w_max > 0:
        raise NonPositiveLandscape(f"landscape function is nonpositive on [0, pi] (max {w_max:.3e})")
    w_min = 1.0 / w_max
    return EstimateResult(z_star=candidates[i], w_max=w_max, W_min=w_min, lambda0_est=ESTIMATE_FACTOR * w_min)


def landscape_fd(potential: Potential, left: RobinBC, right: RobinBC, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Second-order finite-difference landscape function on N uniform intervals.

    Interior rows use the centred three-point stencil.  The boundary
    derivative is the one-sided difference corrected with ``w'' = q w - 1``
    taken from the equation itself, e.g. at the left end

        w'(0) = (w1 - w0) / h - (h / 2) (q0 w0 - 1) + O(h**2),

    which keeps the system tridiagonal and second-order accurate.
    """
    if N < 3:
        raise ValueError("N must be at least 3")
    z = np.linspace(Z_LEFT, Z_RIGHT, N + 1)
    h = z[1] - z[0]
    q = np.asarray(potential(z), dtype=float) * np.ones_like(z)
    if not np.all(np.isfinite(q)):
        raise SingularSystem("potential is not finite on the grid")
    n = N + 1
    ab = np.zeros((3, n))  # upper, main, lower diagonals for solve_banded
    f = np.full(n, h * h)
    ab[1, 1:-1] = 2.0 + h * h * q[1:-1]
    ab[0, 2:] = -1.0
    ab[2, :-2] = -1.0

    a0, a1, w0 = left.alpha0, left.alpha1, left.rhs
    ab[1, 0] = a0 - a1 * (1.0 / h + 0.5 * h * q[0])
    ab[0, 1] = a1 / h
    f[0] = w0 - 0.5 * a1 * h

    b0, b1, w1 = right.alpha0, right.alpha1, right.rhs
    ab[1, -1] = b0 + b1 * (1.0 / h + 0.5 * h * q[-1])
    ab[2, -2] = -b1 / h
    f[-1] = w1 + 0.5 * b1 * h

    try:
        w = solve_banded((1, 1), ab, f, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise SingularSystem("finite-difference landscape system is singular")
    return z, w
