import math

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from pdha.core import ConstantPotential, InversePowerPotential, RobinBC
from pdha.eigensolver import (
    ClosureCondition,
    SolverConfig,
    count_nodes,
    discrete_residual,
    fd_tridiagonal,
    orthogonality,
    shoot,
    slope_solutions,
    solve_fd_matrix,
    solve_robin_eigen,
    solve_slope_normalized,
    sturm_count,
)
from pdha.errors import BracketExhausted, GridMismatch

DIR = (RobinBC.dirichlet(), RobinBC.dirichlet())
CLASSICAL = InversePowerPotential(1.0, 0.1, 1.0)


def test_free_dirichlet_spectrum():
    pairs = solve_robin_eigen(ConstantPotential(0.0), *DIR, k_max=3)
    np.testing.assert_allclose([p.lam for p in pairs], [1, 4, 9, 16], atol=1e-8)
    z = pairs[0].grid
    np.testing.assert_allclose(pairs[0].values, math.sqrt(2 / math.pi) * np.sin(z), atol=1e-6)


def test_constant_shift():
    pairs = solve_robin_eigen(ConstantPotential(5.0), *DIR, k_max=1)
    np.testing.assert_allclose([p.lam for p in pairs], [6, 9], atol=1e-8)


def test_mixed_dirichlet_neumann():
    # y(0) = 0, y'(pi) = 0: eigenvalues (n + 1/2)^2
    pairs = solve_robin_eigen(ConstantPotential(0.0), RobinBC.dirichlet(), RobinBC.neumann(), k_max=2)
    np.testing.assert_allclose([p.lam for p in pairs], [0.25, 2.25, 6.25], atol=1e-8)


def test_robin_uses_plus_sign_convention():
    # y - y' = 0 at 0, y(pi) = 0; y = sin(s z) + s cos(s z) needs tan(s pi) = -s
    left = RobinBC(1.0, -1.0)
    pairs = solve_robin_eigen(ConstantPotential(0.0), left, RobinBC.dirichlet(), k_max=0)
    s = math.sqrt(pairs[0].lam)
    assert math.tan(s * math.pi) == pytest.approx(-s, rel=1e-6)
    assert solve_fd_matrix(ConstantPotential(0.0), left, RobinBC.dirichlet(), 0)[0] == pytest.approx(
        pairs[0].lam, abs=1e-4)


def test_classical_values():
    pairs = solve_robin_eigen(CLASSICAL, *DIR, k_max=1)
    assert pairs[0].lam == pytest.approx(1.5198658, abs=1e-6)
    assert pairs[1].lam == pytest.approx(4.9433098, abs=1e-6)
    assert [p.node_count for p in pairs] == [0, 1]
    assert abs(orthogonality(*pairs)) < 1e-8
    assert np.trapezoid(pairs[0].values ** 2, pairs[0].grid) == pytest.approx(1.0, abs=1e-10)
    assert all(discrete_residual(CLASSICAL, p) < 1e-5 for p in pairs)


def test_fd_agrees_with_shooting_and_lapack():
    lam = [p.lam for p in solve_robin_eigen(CLASSICAL, *DIR, k_max=2)]
    fd = solve_fd_matrix(CLASSICAL, *DIR, k_max=2, N=4000)
    np.testing.assert_allclose(fd, lam, atol=1e-4)
    _, diag, offprod = fd_tridiagonal(CLASSICAL, *DIR, 4000)
    ref = eigh_tridiagonal(diag, -np.sqrt(offprod), select="i", select_range=(0, 2), eigvals_only=True)
    # LAPACK's default bisection tolerance is about eps * ||T|| ~ 1e-9 here
    np.testing.assert_allclose(fd, ref, atol=1e-8)


def test_sturm_count_is_monotone():
    _, diag, offprod = fd_tridiagonal(CLASSICAL, *DIR, 500)
    counts = sturm_count(diag, offprod, np.array([0.0, 1.0, 2.0, 5.0, 10.0]))
    assert list(counts) == sorted(counts)
    assert counts[0] == 0 and counts[2] == 1 and counts[3] == 2


def test_shoot_reports_nodes():
    y, _, nodes = shoot(ConstantPotential(0.0), 9.0, 0.0, 1.0)
    assert abs(y) < 1e-8 and nodes == 2


def test_count_nodes_ignores_ends_and_ties():
    assert count_nodes([0.0, 1.0, -1.0, 1.0, 0.0]) == 2
    assert count_nodes([1e-3, 1.0, 1e-20, 1.0, -1e-3]) == 0


def test_scan_too_short_raises():
    cfg = SolverConfig(lambda_scan=(0.0, 3.0, 0.25))
    with pytest.raises(BracketExhausted):
        solve_robin_eigen(CLASSICAL, *DIR, k_max=1, cfg=cfg)


def test_orthogonality_requires_common_grid():
    a = solve_robin_eigen(CLASSICAL, *DIR, k_max=0)[0]
    b = solve_robin_eigen(CLASSICAL, *DIR, k_max=0, cfg=SolverConfig(n_points=501))[0]
    with pytest.raises(GridMismatch):
        orthogonality(a, b)


@pytest.mark.parametrize("closure", [ClosureCondition("unit_l2"), ClosureCondition("left_value", 1.0),
                                     ClosureCondition("right_value", 1.0)])
def test_slope_mode_meets_all_conditions(closure):
    pot = InversePowerPotential(1.0, 0.5, 1.0)
    for pair in slope_solutions(pot, 1.0, -1.0, closure, count=2):
        z, y = pair.grid, pair.values
        h = z[1] - z[0]
        # one-sided fourth-order end slopes
        d0 = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h)
        d1 = (25 * y[-1] - 48 * y[-2] + 36 * y[-3] - 16 * y[-4] + 3 * y[-5]) / (12 * h)
        assert d0 == pytest.approx(1.0, abs=1e-4)
        assert d1 == pytest.approx(-1.0, abs=1e-4)
        if closure.kind == "unit_l2":
            assert np.trapezoid(y * y, z) == pytest.approx(1.0, abs=1e-6)
        elif closure.kind == "left_value":
            assert y[0] == pytest.approx(1.0, abs=1e-8)
        else:
            assert y[-1] == pytest.approx(1.0, abs=1e-8)
        assert discrete_residual(pot, pair) < 1e-4


def test_slope_mode_lambda0_decreases_with_b():
    lams = [solve_slope_normalized(InversePowerPotential(1.0, b, 1.0), 1.0, -1.0).lam for b in (0.3, 0.5, 6.0)]
    assert lams[0] > lams[1] > lams[2]


def test_closure_validation():
    with pytest.raises(ValueError):
        ClosureCondition("mean")
    assert ClosureCondition("left_value", 2.0).label == "left_value(2)"
