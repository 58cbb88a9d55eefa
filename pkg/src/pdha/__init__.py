"""Landscape estimates and numerical spectra for Schrödinger problems with q = c/(a·z + b)²."""

from .core import InvariantParams, InversePowerPotential, RobinBC, SchrodingerProblem, normalize_invariant
from .eigensolver import ClosureCondition, EigenPair, SolverConfig, solve_fd_matrix, solve_robin_eigen, solve_slope_normalized
from .errors import NumericalFailure, PdhaError
from .landscape import build_landscape, estimate_lambda0
from .liouville import build_canonical, transform_bc

__version__ = "0.1.0"

__all__ = [
    "ClosureCondition",
    "EigenPair",
    "InvariantParams",
    "InversePowerPotential",
    "NumericalFailure",
    "PdhaError",
    "RobinBC",
    "SchrodingerProblem",
    "SolverConfig",
    "build_canonical",
    "build_landscape",
    "estimate_lambda0",
    "normalize_invariant",
    "solve_fd_matrix",
    "solve_robin_eigen",
    "solve_slope_normalized",
    "transform_bc",
]
