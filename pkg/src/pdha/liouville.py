"""Canonical-form problems that reduce to the inverse-square potential.

The canonical problem ``-(u y')' = lambda y`` on ``[z0, z1]`` with

    u(z) = [a (1 - 2k) (z - d)] ** (-4k / (1 - 2k))

is carried to ``-y'' + c / (a z + b)**2 y = lambda y`` on ``[0, pi]`` by the
Liouville change of variables ``zhat = int dz / sqrt(u)``, ``y = v * yhat``,
``v = u**(-1/4)``.  Here ``k`` is either root of ``a**2 k (k + 1) = c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import Z_LEFT, Z_RIGHT
from .errors import DegenerateBC, DomainError, SingularExponent

Branch = Literal["plus", "minus"]

# relative slack allowed when checking that a point lies in [z0, z1] or [0, pi]
_DOMAIN_SLACK = 1e-12


def branch_exponent_k(a: float, c: float, branch: Branch) -> float:
    if a == 0:
        raise DomainError("a must be nonzero")
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    sign = _branch_sign(branch)
    return 0.5 * (-1.0 + sign * math.sqrt(a * a + 4.0 * c) / a)


def _branch_sign(branch: str) -> float:
    if branch == "plus":
        return 1.0
    if branch == "minus":
        return -1.0
    raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")


@dataclass(frozen=True)
class CanonicalProblem:
    a: float
    b: float
    c: float
    d: float
    branch: Branch
    k: float
    z0: float
    z1: float

    @property
    def one_minus_2k(self) -> float:
        return 1.0 - 2.0 * self.k

    @property
    def exponent(self) -> float:
        """Power applied to the bracket in u(z)."""
        return -4.0 * self.k / self.one_minus_2k

    @property
    def base_factor(self) -> float:
        """Coefficient multiplying (z - d) inside the bracket of u(z)."""
        return self.a * self.one_minus_2k

    def u(self, z):
        """Leading coefficient u(z) of the canonical operator."""
        return (self.base_factor * (np.asarray(z, dtype=float) - self.d)) ** self.exponent

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "branch": self.branch,
            "k": self.k,
            "d": self.d,
            "z0": self.z0,
            "z1": self.z1,
            "exponent": self.exponent,
            "base_factor": self.base_factor,
        }


def origin_shift(a: float, b: float, c: float, branch: Branch) -> float:
    """The shift d that places the left endpoint z0 at the origin."""
    k = branch_exponent_k(a, c, branch)
    m = 1.0 - 2.0 * k
    if m == 0:
        raise SingularExponent("1 - 2k vanishes")
    return -(b**m) / (a * m)


def build_canonical(a: float, b: float, c: float, d: float, branch: Branch) -> CanonicalProblem:
    if not (a > 0 and b > 0 and c > 0):
        raise DomainError(f"a, b, c must be positive, got a={a}, b={b}, c={c}")
    k = branch_exponent_k(a, c, branch)
    m = 1.0 - 2.0 * k
    if m == 0:
        raise SingularExponent("1 - 2k vanishes; the change of variables is logarithmic")
    z0 = b**m / (a * m) + d
    z1 = (a * Z_RIGHT + b) ** m / (a * m) + d
    return CanonicalProblem(a=a, b=b, c=c, d=d, branch=branch, k=k, z0=z0, z1=z1)


def _check_zhat(zhat) -> np.ndarray:
    z = np.asarray(zhat, dtype=float)
    tol = _DOMAIN_SLACK * Z_RIGHT
    if np.any(z < Z_LEFT - tol) or np.any(z > Z_RIGHT + tol) or not np.all(np.isfinite(z)):
        raise DomainError(f"zhat outside [0, pi]: {zhat}")
    return z


def map_zhat_to_z(cp: CanonicalProblem, zhat):
    z = _check_zhat(zhat)
    m = cp.one_minus_2k
    out = (cp.a * z + cp.b) ** m / (cp.a * m) + cp.d
    return float(out) if out.ndim == 0 else out


def map_z_to_zhat(cp: CanonicalProblem, z):
    zz = np.asarray(z, dtype=float)
    tol = _DOMAIN_SLACK * max(abs(cp.z0), abs(cp.z1), 1.0)
    if np.any(zz < cp.z0 - tol) or np.any(zz > cp.z1 + tol) or not np.all(np.isfinite(zz)):
        raise DomainError(f"z outside [{cp.z0}, {cp.z1}]: {z}")
    m = cp.one_minus_2k
    out = ((cp.a * m * (zz - cp.d)) ** (1.0 / m) - cp.b) / cp.a
    return float(out) if out.ndim == 0 else out


def v_hat(cp: CanonicalProblem, zhat):
    z = _check_zhat(zhat)
    out = (cp.a * z + cp.b) ** cp.k
    return float(out) if out.ndim == 0 else out


def u_hat(cp: CanonicalProblem, zhat):
    z = _check_zhat(zhat)
    out = (cp.a * z + cp.b) ** (-4.0 * cp.k)
    return float(out) if out.ndim == 0 else out


def dv_dzhat(cp: CanonicalProblem, zhat):
    z = _check_zhat(zhat)
    out = cp.a * cp.k * (cp.a * z + cp.b) ** (cp.k - 1.0)
    return float(out) if out.ndim == 0 else out


def zdot(cp: CanonicalProblem, zhat):
    """dz/dzhat, which equals sqrt(u) along the map."""
    z = _check_zhat(zhat)
    out = (cp.a * z + cp.b) ** (-2.0 * cp.k)
    return float(out) if out.ndim == 0 else out


def invariant_analytic(cp: CanonicalProblem, zhat):
    z = _check_zhat(zhat)
    out = cp.c / (cp.a * z + cp.b) ** 2
    return float(out) if out.ndim == 0 else out


def invariant_from_v(cp: CanonicalProblem, zhat: float, h: float = 1e-4) -> float:
    """Invariant function ``v * (1/v)''`` by a central second difference.

    At the two endpoints the analytic value is returned instead of a
    one-sided difference.
    """
    z = float(zhat)
    if z <= Z_LEFT or z >= Z_RIGHT:
        return invariant_analytic(cp, z)
    if z - h < Z_LEFT or z + h > Z_RIGHT:
        raise DomainError(f"stencil z +/- h leaves [0, pi]: z={z}, h={h}")

    def w(t: float) -> float:
        return (cp.a * t + cp.b) ** (-cp.k)

    return (cp.a * z + cp.b) ** cp.k * (w(z + h) - 2.0 * w(z) + w(z - h)) / (h * h)


@dataclass(frozen=True)
class BoundaryTransform:
    alpha0: float
    alpha1: float
    beta0: float
    beta1: float


def transform_bc(cp: CanonicalProblem, a0: float, a1: float, b0: float, b1: float) -> BoundaryTransform:
    if a0 == 0 and a1 == 0:
        raise DegenerateBC("left canonical condition has a0 = a1 = 0")
    if b0 == 0 and b1 == 0:
        raise DegenerateBC("right canonical condition has b0 = b1 = 0")
    v0, v1 = v_hat(cp, Z_LEFT), v_hat(cp, Z_RIGHT)
    zd0, zd1 = zdot(cp, Z_LEFT), zdot(cp, Z_RIGHT)
    dv0, dv1 = dv_dzhat(cp, Z_LEFT), dv_dzhat(cp, Z_RIGHT)
    return BoundaryTransform(
        alpha0=a0 * v0 - a1 / zd0 * dv0,
        alpha1=a1 * v0 / zd0,
        beta0=b0 * v1 + b1 / zd1 * dv1,
        beta1=b1 * v1 / zd1,
    )
