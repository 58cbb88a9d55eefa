"""Problem definition: the inverse-power potential family and Robin data.

Every concrete problem lives on the fixed interval [0, pi] and is written in
Liouville normal form ``-y'' + q(z) y = lambda y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping

import numpy as np

from .errors import DegenerateBC, DomainError, NonFinitePotential, UnsupportedOrder

Z_LEFT = 0.0
Z_RIGHT = math.pi
PROBE_POINTS = 1001

Potential = Callable[[Any], Any]


@dataclass(frozen=True)
class InvariantParams:
    """Parameters of ``q(z) = c / (a z + b)**n``."""

    a: float
    b: float
    c: float
    n: int = 2

    def __post_init__(self) -> None:
        if not (self.a > 0 and self.b > 0 and self.c > 0):
            raise DomainError(f"a, b, c must be positive, got a={self.a}, b={self.b}, c={self.c}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class NormalizedInvariant:
    """``q(z) = c_hat / (z + b_hat)**2`` with ``b_hat = b/a`` and ``c_hat = c/a**2``."""

    b_hat: float
    c_hat: float

    def __post_init__(self) -> None:
        if not (self.b_hat > 0 and self.c_hat > 0):
            raise DomainError(f"b_hat and c_hat must be positive, got {self.b_hat}, {self.c_hat}")

    def potential(self) -> "InversePowerPotential":
        return InversePowerPotential(a=1.0, b=self.b_hat, c=self.c_hat, n=2)


@dataclass(frozen=True)
class RobinBC:
    """Endpoint condition ``alpha0 * y + alpha1 * y' = rhs``.

    The same plus-sign form is used at both ends of the interval.
    """

    alpha0: float
    alpha1: float
    rhs: float = 0.0

    def __post_init__(self) -> None:
        if abs(self.alpha0) + abs(self.alpha1) == 0:
            raise DegenerateBC("alpha0 and alpha1 cannot both be zero")

    @classmethod
    def dirichlet(cls, value: float = 0.0) -> "RobinBC":
        return cls(1.0, 0.0, value)

    @classmethod
    def neumann(cls, slope: float = 0.0) -> "RobinBC":
        return cls(0.0, 1.0, slope)

    @property
    def is_dirichlet(self) -> bool:
        return self.alpha1 == 0

    @property
    def is_neumann(self) -> bool:
        return self.alpha0 == 0

    @property
    def homogeneous(self) -> bool:
        return self.rhs == 0

    def to_dict(self) -> dict:
        return {"alpha0": self.alpha0, "alpha1": self.alpha1, "rhs": self.rhs}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "RobinBC":
        return cls(float(d["alpha0"]), float(d["alpha1"]), float(d.get("rhs", 0.0)))


@dataclass(frozen=True)
class InversePowerPotential:
    """Vectorised, picklable ``z -> c / (a z + b)**n``."""

    a: float
    b: float
    c: float
    n: int = 2

    def __call__(self, z):
        return self.c / (self.a * np.asarray(z, dtype=float) + self.b) ** self.n


@dataclass(frozen=True)
class ConstantPotential:
    value: float = 0.0

    def __call__(self, z):
        return np.full_like(np.asarray(z, dtype=float), self.value)


@dataclass(frozen=True)
class SchrodingerProblem:
    potential: Potential
    left_bc: RobinBC
    right_bc: RobinBC


def normalize_invariant(p: InvariantParams) -> NormalizedInvariant:
    if p.n != 2:
        raise UnsupportedOrder(f"closed-form normalisation exists only for n=2, got n={p.n}")
    return NormalizedInvariant(b_hat=p.b / p.a, c_hat=p.c / p.a**2)


def q_eval(p: InvariantParams, zhat: float) -> float:
    base = p.a * zhat + p.b
    if base <= 0:
        raise DomainError(f"a*z + b = {base} is not positive at z={zhat}")
    return p.c / base**p.n


def validate_problem(sp: SchrodingerProblem) -> SchrodingerProblem:
    # RobinBC validates on construction, but a caller may have bypassed it
    for side, bc in (("left", sp.left_bc), ("right", sp.right_bc)):
        if abs(bc.alpha0) + abs(bc.alpha1) == 0:
            raise DegenerateBC(f"{side} boundary condition has alpha0 = alpha1 = 0")
    grid = np.linspace(Z_LEFT, Z_RIGHT, PROBE_POINTS)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = np.asarray(sp.potential(grid), dtype=float)
    if values.shape != grid.shape:
        values = np.broadcast_to(values, grid.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        raise NonFinitePotential(f"potential is not finite at z={grid[bad][0]:.6g}")
    return sp


def problem_from_dict(d: Mapping[str, Any]) -> tuple[InvariantParams, SchrodingerProblem]:
    """Build a problem from the JSON schema used by the CLI.

    ``{"a":..,"b":..,"c":..,"n":..,"bc":{"left":{...},"right":{...}}}``;
    missing boundary data defaults to homogeneous Dirichlet.
    """
    params = InvariantParams(
        a=float(d.get("a", 1.0)), b=float(d["b"]), c=float(d["c"]), n=int(d.get("n", 2))
    )
    bc = d.get("bc", {})
    left = RobinBC.from_dict(bc["left"]) if "left" in bc else RobinBC.dirichlet()
    right = RobinBC.from_dict(bc["right"]) if "right" in bc else RobinBC.dirichlet()
    potential = InversePowerPotential(params.a, params.b, params.c, params.n)
    return params, validate_problem(SchrodingerProblem(potential, left, right))
