import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdha.core import (
    ConstantPotential,
    InvariantParams,
    InversePowerPotential,
    RobinBC,
    SchrodingerProblem,
    normalize_invariant,
    problem_from_dict,
    q_eval,
    validate_problem,
)
from pdha.errors import DegenerateBC, DomainError, NonFinitePotential, UnsupportedOrder

pos = st.floats(0.05, 20.0)


@given(a=pos, b=pos, c=pos, z=st.floats(0.0, math.pi))
def test_normalised_potential_matches_original(a, b, c, z):
    p = InvariantParams(a, b, c)
    n = normalize_invariant(p)
    assert n.potential()(z) == pytest.approx(q_eval(p, z), rel=1e-12)


@given(b=pos, c=pos)
def test_potential_is_positive_and_decreasing(b, c):
    q = InversePowerPotential(1.0, b, c)(np.linspace(0, math.pi, 50))
    assert np.all(q > 0)
    assert np.all(np.diff(q) < 0)


def test_classical_case_value():
    assert q_eval(InvariantParams(1, 0.1, 1), 0.0) == pytest.approx(100.0)


def test_rejects_nonpositive_parameters():
    with pytest.raises(DomainError):
        InvariantParams(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        InvariantParams(-1.0, 1.0, 1.0)


def test_only_square_order_normalises():
    with pytest.raises(UnsupportedOrder):
        normalize_invariant(InvariantParams(1, 1, 1, n=3))


def test_robin_constructors():
    d, n = RobinBC.dirichlet(2.0), RobinBC.neumann(-1.0)
    assert d.is_dirichlet and not d.is_neumann and d.rhs == 2.0
    assert n.is_neumann and n.rhs == -1.0 and not n.homogeneous
    assert RobinBC.from_dict(RobinBC(0.3, -0.7, 1.5).to_dict()) == RobinBC(0.3, -0.7, 1.5)
    with pytest.raises(DegenerateBC):
        RobinBC(0.0, 0.0)


def test_validate_problem_flags_nonfinite_potential():
    bad = SchrodingerProblem(lambda z: 1.0 / z, RobinBC.dirichlet(), RobinBC.dirichlet())
    with pytest.raises(NonFinitePotential):
        validate_problem(bad)
    ok = SchrodingerProblem(ConstantPotential(3.0), RobinBC.dirichlet(), RobinBC.dirichlet())
    assert validate_problem(ok) is ok


def test_problem_from_dict_defaults_to_dirichlet():
    params, sp = problem_from_dict({"b": 0.1, "c": 1.0})
    assert params == InvariantParams(1.0, 0.1, 1.0)
    assert sp.left_bc == sp.right_bc == RobinBC.dirichlet()
    _, sp = problem_from_dict({"a": 2, "b": 1, "c": 1, "bc": {"left": {"alpha0": 0, "alpha1": 1, "rhs": 1}}})
    assert sp.left_bc == RobinBC.neumann(1.0)
