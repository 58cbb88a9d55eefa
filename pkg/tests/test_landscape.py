import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_bvp

from pdha.core import InversePowerPotential, RobinBC
from pdha.errors import DomainError, ResonantCase, ZeroExponent
from pdha.landscape import (
    build_landscape,
    characteristic_exponents,
    coefficients_dirichlet,
    coefficients_neumann,
    critical_points,
    estimate_lambda0,
    landscape_fd,
    robin_closed_form,
    solve_coefficients_robin,
)

DIR = (RobinBC.dirichlet(), RobinBC.dirichlet())
NEU = (RobinBC.neumann(1.0), RobinBC.neumann(-1.0))
c_hats = st.floats(0.05, 1.95)
b_hats = st.floats(0.1, 6.0)


@given(c=st.floats(0.0, 10.0))
def test_exponents_satisfy_vieta(c):
    p1, p2 = characteristic_exponents(c)
    assert p1 + p2 == pytest.approx(1.0)
    assert p1 * p2 == pytest.approx(-c, abs=1e-12 * max(1.0, c))


def test_golden_ratio():
    assert characteristic_exponents(1.0)[0] == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-14)


def test_free_dirichlet_landscape_is_parabola():
    sol = build_landscape(1.0, 0.0, *DIR)
    z = np.linspace(0, math.pi, 101)
    np.testing.assert_allclose(sol.value(z), z * (math.pi - z) / 2, atol=1e-12)
    est = estimate_lambda0(sol)
    assert est.z_star == pytest.approx(math.pi / 2, abs=1e-10)
    assert est.lambda0_est == pytest.approx(10 / math.pi**2, abs=1e-12)


@given(c=c_hats, b=b_hats)
@settings(max_examples=40, deadline=None)
def test_closed_form_solves_the_problem(c, b):
    for left, right in (DIR, NEU, (RobinBC(1.0, -0.5, 0.2), RobinBC(1.0, 0.7, -0.1))):
        sol = build_landscape(b, c, left, right)
        z = np.linspace(0, math.pi, 41)
        scale = max(1.0, float(np.max(np.abs(sol.value(z)))))
        assert np.max(np.abs(sol.ode_residual(z))) < 1e-9 * scale * (1 + c / b**2)
        for bc, zz in ((left, 0.0), (right, math.pi)):
            got = bc.alpha0 * sol.value(zz) + bc.alpha1 * sol.derivative(zz)
            assert got == pytest.approx(bc.rhs, abs=1e-9 * scale)


def test_closed_form_against_bvp_oracle():
    c, b = 0.7, 0.4
    left, right = RobinBC(2.0, -1.0, 0.5), RobinBC(1.0, 0.3, 0.0)
    q = InversePowerPotential(1.0, b, c)

    def rhs(z, y):
        return np.vstack([y[1], q(z) * y[0] - 1.0])

    def bc(ya, yb):
        return np.array([left.alpha0 * ya[0] + left.alpha1 * ya[1] - left.rhs,
                         right.alpha0 * yb[0] + right.alpha1 * yb[1] - right.rhs])

    z = np.linspace(0, math.pi, 200)
    ref = solve_bvp(rhs, bc, z, np.zeros((2, z.size)), tol=1e-10, max_nodes=100000)
    assert ref.success
    sol = build_landscape(b, c, left, right)
    np.testing.assert_allclose(sol.value(z), ref.sol(z)[0], atol=1e-7)


def test_robin_closed_form_equals_solve():
    rng = np.random.default_rng(0)
    for _ in range(50):
        c, b = rng.uniform(0.05, 1.9), rng.uniform(0.1, 6)
        left, right = RobinBC(*rng.uniform(-2, 2, 3)), RobinBC(*rng.uniform(-2, 2, 3))
        x, y = solve_coefficients_robin(b, c, left, right), robin_closed_form(b, c, left, right)
        ref = max(map(abs, (*x, *y)))
        assert max(abs(x[0] - y[0]), abs(x[1] - y[1])) <= 1e-12 * ref


def test_special_forms_match_robin():
    c, b = 1.0, 0.1
    np.testing.assert_allclose(coefficients_dirichlet(b, c, 0.3, -0.2),
                               solve_coefficients_robin(b, c, RobinBC.dirichlet(0.3), RobinBC.dirichlet(-0.2)), rtol=1e-12)
    np.testing.assert_allclose(coefficients_neumann(b, c, 1.0, -1.0),
                               solve_coefficients_robin(b, c, *NEU), rtol=1e-12)


def test_critical_point_is_stationary_and_maximum():
    sol = build_landscape(0.1, 1.0, *DIR)
    (zs,) = critical_points(sol)
    assert abs(sol.derivative(zs)) < 1e-10
    grid = np.linspace(0, math.pi, 5001)
    assert estimate_lambda0(sol).w_max >= float(np.max(sol.value(grid))) - 1e-12


def test_estimate_overestimates_classical_case():
    est = estimate_lambda0(build_landscape(0.1, 1.0, *DIR))
    assert est.W_min == pytest.approx(1 / est.w_max)
    assert est.lambda0_est > 1.5198658


def test_monotone_landscape_has_no_critical_points():
    sol = build_landscape(1.0, 1.0, RobinBC.dirichlet(), RobinBC.neumann(5.0))
    assert critical_points(sol) == []


@pytest.mark.parametrize("bcs", [DIR, NEU])
def test_fd_oracle_converges_at_second_order(bcs):
    sol = build_landscape(0.3, 1.4, *bcs)
    errs = []
    for n in (500, 1000, 2000):
        z, w = landscape_fd(sol.potential, *bcs, n)
        errs.append(np.max(np.abs(w - sol.value(z))))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 1.9)
    assert errs[-1] < 1e-4


def test_parameter_errors():
    with pytest.raises(ResonantCase):
        build_landscape(1.0, 2.0, *DIR)
    with pytest.raises(DomainError):
        build_landscape(0.0, 1.0, *DIR)
    with pytest.raises(ZeroExponent):
        coefficients_neumann(1.0, 0.0)
