"""Self-check suite run by ``pdha verify``.

Each check returns a :class:`Check`; the suite passes when every check does.
The Neumann closure comparison is informational and never fails the suite.
"""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .core import ConstantPotential, InvariantParams, InversePowerPotential, RobinBC, normalize_invariant, q_eval
from .eigensolver import (
    ClosureCondition,
    SolverConfig,
    count_nodes,
    orthogonality,
    slope_solutions,
    solve_fd_matrix,
    solve_robin_eigen,
    solve_slope_normalized,
)
from .errors import PdhaError
from .landscape import (
    build_landscape,
    characteristic_exponents,
    coefficients_dirichlet,
    coefficients_neumann,
    estimate_lambda0,
    landscape_fd,
    robin_closed_form,
    solve_coefficients_robin,
)
from .liouville import build_canonical, invariant_from_v, origin_shift
from .sweep import SweepConfig, run_sweep, write_sweep_csv

# reported eigenvalues for c_hat = 1: Dirichlet (Fig. 7) and Neumann slopes +-1 (Fig. 8)
DIRICHLET_TARGETS = {0.1: (1.520, 4.493), 0.5: (1.297, 4.416), 6.0: (1.018, 4.018)}
NEUMANN_TARGETS = {0.3: (0.718, 2.082), 0.5: (0.500, 1.371), 6.0: (0.254, 1.119)}
REPORTED_TOL = 0.005


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    gate: bool = True


def _dirichlet():
    return RobinBC.dirichlet(), RobinBC.dirichlet()


def random_spectral_grid(n: int = 20, seed: int = 20240601) -> list[tuple[float, float]]:
    """(c_hat, b_hat) cases with c_hat in (0, 1.9] and b_hat in [0.1, 6]."""
    rng = np.random.default_rng(seed)
    c = rng.uniform(0.05, 1.9, n)
    b = rng.uniform(0.1, 6.0, n)
    return [(float(ci), float(bi)) for ci, bi in zip(c, b)]


def random_landscape_cases(n: int = 20, seed: int = 7) -> list[tuple[float, float, RobinBC, RobinBC]]:
    rng = np.random.default_rng(seed)
    bcs = [
        (RobinBC.dirichlet(), RobinBC.dirichlet()),
        (RobinBC.neumann(1.0), RobinBC.neumann(-1.0)),
        (RobinBC(1.0, -0.5, 0.2), RobinBC(1.0, 0.7, -0.1)),
    ]
    out = []
    for i in range(n):
        c = float(rng.uniform(0.1, 1.9))
        b = float(rng.uniform(0.1, 6.0))
        out.append((c, b, *bcs[i % len(bcs)]))
    return out


def random_robin_cases(n: int = 100, seed: int = 11):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        c = float(rng.uniform(0.05, 3.0))
        if abs(c - 2.0) < 0.05:
            continue
        b = float(rng.uniform(0.1, 6.0))
        left = RobinBC(*rng.uniform(-2, 2, 3))
        right = RobinBC(*rng.uniform(-2, 2, 3))
        out.append((b, c, left, right))
    return out


def coefficient_gap(x, y) -> float:
    """Largest coefficient difference relative to the coefficient vector size."""
    ref = max(abs(x[0]), abs(x[1]), abs(y[0]), abs(y[1]))
    return max(abs(x[0] - y[0]), abs(x[1] - y[1])) / ref if ref else 0.0


# ------------------------------------------------------------------ criteria


def check_classical_spectrum() -> Check:
    t = time.perf_counter()
    pairs = solve_robin_eigen(InversePowerPotential(1, 0.1, 1), *_dirichlet(), k_max=1)
    dt = time.perf_counter() - t
    l0, l1 = pairs[0].lam, pairs[1].lam
    ok = abs(l0 - 1.520) <= REPORTED_TOL and abs(l1 - 4.493) <= REPORTED_TOL and dt < 1.0
    return Check("C1 classical Dirichlet spectrum", ok, f"lambda0={l0:.6f} lambda1={l1:.6f} ({dt:.2f}s); reported 1.520, 4.493")


def check_dirichlet_family() -> Check:
    t = time.perf_counter()
    parts, ok = [], True
    for bh in (0.5, 6.0):
        pairs = solve_robin_eigen(InversePowerPotential(1, bh, 1), *_dirichlet(), k_max=1)
        e0, e1 = DIRICHLET_TARGETS[bh]
        ok &= abs(pairs[0].lam - e0) <= REPORTED_TOL and abs(pairs[1].lam - e1) <= REPORTED_TOL
        parts.append(f"b={bh:g}: {pairs[0].lam:.4f}, {pairs[1].lam:.4f}")
    dt = time.perf_counter() - t
    return Check("C2 Dirichlet family b=0.5, 6", ok and dt < 2.0, "; ".join(parts) + f" ({dt:.2f}s)")


def check_estimator_calibration() -> Check:
    sol = build_landscape(1.0, 0.0, *_dirichlet())
    est = estimate_lambda0(sol).lambda0_est
    exact = solve_robin_eigen(ConstantPotential(0.0), *_dirichlet(), k_max=0)[0].lam
    gap = abs((est - 1.0) - (10 / math.pi**2 - 1))
    ok = gap <= 1e-10 and abs(exact - 1.0) < 1e-8
    return Check("C3 estimator calibration q=0", ok, f"lambda0_est={est:.12f} (10/pi^2={10 / math.pi**2:.12f}), exact={exact:.10f}")


def check_overestimation(rows=None) -> Check:
    t = time.perf_counter()
    rows = rows if rows is not None else run_sweep(SweepConfig(bc_kind="dirichlet", c_hat_list=(0.5, 1.0, 1.9)))
    dt = time.perf_counter() - t
    failed = [r for r in rows if r.failed]
    under = [r for r in rows if not r.failed and r.lambda0_est < r.lambda0_num]
    worst = max((r.rel_overestimate for r in rows if not r.failed), default=math.nan)
    ok = not failed and not under and worst <= 0.25 and dt < 30
    return Check(
        "C4 landscape overestimates (Dirichlet sweep)",
        ok,
        f"{len(rows)} rows, {len(under)} underestimates, {len(failed)} failures, max rel over {worst:.4f} ({dt:.1f}s)",
    )


def check_landscape_oracle() -> Check:
    worst_err, worst_order = 0.0, math.inf
    for c, b, left, right in random_landscape_cases():
        sol = build_landscape(b, c, left, right)
        errs = []
        for N in (2000, 4000):
            z, w = landscape_fd(sol.potential, left, right, N)
            errs.append(float(np.max(np.abs(w - sol.value(z)))))
        worst_err = max(worst_err, errs[1])
        worst_order = min(worst_order, math.log2(errs[0] / errs[1]))
    ok = worst_err < 1e-5 and worst_order >= 1.9
    return Check("C5 closed form vs FD landscape", ok, f"max sup error {worst_err:.2e} at N=4000, min order {worst_order:.3f}")


def check_formula_transcription() -> Check:
    worst_robin = 0.0
    for b, c, left, right in random_robin_cases():
        try:
            worst_robin = max(worst_robin, coefficient_gap(solve_coefficients_robin(b, c, left, right),
                                                           robin_closed_form(b, c, left, right)))
        except PdhaError:
            continue
    rng = np.random.default_rng(3)
    worst_spec = 0.0
    for _ in range(20):
        c, b = float(rng.uniform(0.1, 1.9)), float(rng.uniform(0.1, 6))
        w0, w1, s0, s1 = rng.uniform(-2, 2, 4)
        d = coefficients_dirichlet(b, c, w0, w1)
        worst_spec = max(worst_spec, coefficient_gap(d, solve_coefficients_robin(b, c, RobinBC(1, 0, w0), RobinBC(1, 0, w1))))
        n = coefficients_neumann(b, c, s0, s1)
        worst_spec = max(worst_spec, coefficient_gap(n, solve_coefficients_robin(b, c, RobinBC(0, 1, s0), RobinBC(0, 1, s1))))
    ok = worst_robin <= 1e-12 and worst_spec <= 1e-12
    return Check("C6 coefficient formulas", ok, f"Robin formula vs solve {worst_robin:.1e}; Dirichlet/Neumann vs Robin {worst_spec:.1e}")


def check_liouville() -> Check:
    d = origin_shift(1.0, 0.1, 1.0, "minus")
    cp = build_canonical(1.0, 0.1, 1.0, d, "minus")
    ok = abs(cp.z1 - 34.4068) <= 1e-3 and abs(abs(d) - 1.37e-5) <= 0.01 * 1.37e-5
    zs = np.linspace(0.3, 2.8, 10)
    q_err = max(abs(invariant_from_v(cp, z) - 1.0 / (z + 0.1) ** 2) for z in zs)
    cp_plus = build_canonical(1.0, 0.1, 1.0, 0.0, "plus")
    branch_err = max(abs(invariant_from_v(cp, z) - invariant_from_v(cp_plus, z)) for z in zs)
    ok = ok and q_err < 1e-6 and branch_err < 1e-6
    return Check("C7 Liouville transformation", ok,
                 f"z1={cp.z1:.6f} d={d:.4e} |q_fd-q|={q_err:.1e} |q_minus-q_plus|={branch_err:.1e}")


def check_spectral_structure() -> Check:
    bad, worst_orth, worst_gap = [], 0.0, 0.0
    for c, b in random_spectral_grid():
        pot = InversePowerPotential(1, b, c)
        pairs = solve_robin_eigen(pot, *_dirichlet(), k_max=4)
        if [count_nodes(p.values) for p in pairs] != list(range(5)):
            bad.append((c, b))
        worst_orth = max(worst_orth, abs(orthogonality(pairs[0], pairs[1])))
        fd = solve_fd_matrix(pot, *_dirichlet(), k_max=1, N=4000)
        worst_gap = max(worst_gap, abs(pairs[0].lam - fd[0]), abs(pairs[1].lam - fd[1]))
    ok = not bad and worst_orth < 1e-6 and worst_gap < 1e-4
    return Check("C8 nodes, orthogonality, shooting vs FD", ok,
                 f"node mismatches {len(bad)}, max |<e0,e1>| {worst_orth:.1e}, max |shoot-fd| {worst_gap:.1e}")


NEUMANN_CLOSURES = (
    ClosureCondition("unit_l2"),
    ClosureCondition("left_value", 1.0),
    ClosureCondition("right_value", 1.0),
)


def neumann_closure_report(closures=NEUMANN_CLOSURES) -> list[dict]:
    """Per closure and b_hat: the first two solutions and their distance to the reported values."""
    out = []
    for closure in closures:
        for bh, targets in NEUMANN_TARGETS.items():
            entry = {"closure": closure.label, "b_hat": bh, "targets": targets}
            try:
                pairs = slope_solutions(InversePowerPotential(1, bh, 1), 1.0, -1.0, closure, count=2)
                lams = (pairs[0].lam, pairs[1].lam)
                entry.update(lams=lams, distance=tuple(abs(x - t) for x, t in zip(lams, targets)))
            except PdhaError as exc:
                entry.update(lams=None, distance=None, error=f"{type(exc).__name__}: {exc}")
            out.append(entry)
    return out


def check_neumann_mode(report=None) -> Check:
    pairs = [solve_slope_normalized_lambda0(bh) for bh in (0.3, 0.5, 6.0)]
    decreasing = pairs[0] > pairs[1] > pairs[2]
    report = report if report is not None else neumann_closure_report()
    lines = []
    for e in report:
        if e.get("lams"):
            lines.append(f"{e['closure']} b={e['b_hat']:g}: {e['lams'][0]:.4f}/{e['lams'][1]:.4f} "
                         f"vs {e['targets'][0]}/{e['targets'][1]} (|d|={e['distance'][0]:.3f}/{e['distance'][1]:.3f})")
        else:
            lines.append(f"{e['closure']} b={e['b_hat']:g}: {e['error']}")
    detail = f"unit_l2 lambda0 = {', '.join(f'{v:.4f}' for v in pairs)}; decreasing={decreasing}\n      " + "\n      ".join(lines)
    return Check("C9 Neumann slope mode (unit_l2) + closure report", decreasing, detail)


def solve_slope_normalized_lambda0(b_hat: float) -> float:
    return solve_slope_normalized(InversePowerPotential(1, b_hat, 1), 1.0, -1.0, ClosureCondition("unit_l2")).lam


def check_determinism(tmpdir=None) -> Check:
    cfg = SweepConfig(bc_kind="dirichlet", c_hat_list=(0.5, 1.0, 1.9))
    with tempfile.TemporaryDirectory(dir=tmpdir) as d:
        p1 = write_sweep_csv(run_sweep(cfg), Path(d) / "a.csv")
        p2 = write_sweep_csv(run_sweep(cfg), Path(d) / "b.csv")
        same = p1.read_bytes() == p2.read_bytes()
    return Check("C10 sweep output is byte-identical", same, "two consecutive default Dirichlet sweeps")


# ------------------------------------------------------- module invariants


def check_golden_ratio() -> Check:
    p1, p2 = characteristic_exponents(1.0)
    err = abs(p1 - (1 + math.sqrt(5)) / 2)
    return Check("golden ratio phi1(c=1)", err <= 1e-14, f"phi1={p1!r}, phi2={p2!r}")


def check_free_spectrum() -> Check:
    pairs = solve_robin_eigen(ConstantPotential(0.0), *_dirichlet(), k_max=1)
    err = max(abs(pairs[0].lam - 1), abs(pairs[1].lam - 4))
    return Check("q=0 Dirichlet spectrum {1, 4}", err <= 1e-6, f"max error {err:.1e}")


def check_normalisation() -> Check:
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        a, b, c = rng.uniform(0.2, 3, 3)
        p = InvariantParams(a, b, c, 2)
        nrm = normalize_invariant(p)
        for z in rng.uniform(0, math.pi, 5):
            ref = q_eval(p, z)
            worst = max(worst, abs(q_eval(InvariantParams(1.0, nrm.b_hat, nrm.c_hat, 2), z) - ref) / ref)
    return Check("normalised invariant equals original", worst <= 1e-14, f"max rel error {worst:.1e}")


def check_landscape_residual() -> Check:
    z = np.linspace(0, math.pi, 1001)
    worst = 0.0
    for c, b, left, right in random_landscape_cases():
        worst = max(worst, float(np.max(np.abs(build_landscape(b, c, left, right).ode_residual(z)))))
    return Check("closed-form landscape ODE residual", worst < 1e-8, f"max residual {worst:.1e}")


CHECKS: list[Callable[[], Check]] = [
    check_golden_ratio,
    check_free_spectrum,
    check_normalisation,
    check_landscape_residual,
    check_classical_spectrum,
    check_dirichlet_family,
    check_estimator_calibration,
    check_overestimation,
    check_landscape_oracle,
    check_formula_transcription,
    check_liouville,
    check_spectral_structure,
    check_neumann_mode,
    check_determinism,
]


def verify_suite(echo: Callable[[str], None] = print) -> list[Check]:
    results = []
    for fn in CHECKS:
        try:
            res = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            res = Check(fn.__name__, False, f"raised {type(exc).__name__}: {exc}")
        results.append(res)
        echo(f"[{'PASS' if res.passed else 'FAIL'}] {res.name}: {res.detail}")
    n_fail = sum(not r.passed for r in results if r.gate)
    echo(f"{len(results) - n_fail}/{len(results)} checks passed")
    return results
