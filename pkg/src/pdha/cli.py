"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure (including
a failed ``verify`` run or a sweep with failed rows).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .core import (
    Z_LEFT,
    Z_RIGHT,
    InvariantParams,
    InversePowerPotential,
    RobinBC,
    normalize_invariant,
    problem_from_dict,
)
from .eigensolver import ClosureCondition, SolverConfig, slope_solutions, solve_robin_eigen
from .errors import NumericalFailure, PdhaError
from .figures import FIGURES, emit_figure_data
from .landscape import build_landscape, critical_points, estimate_lambda0
from .liouville import build_canonical, origin_shift
from .sweep import SweepConfig, fmt, run_sweep, write_sweep_csv
from .verify import verify_suite

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

log = logging.getLogger("pdha")


class UsageError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc


def _parse_bc(text: str) -> RobinBC:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad boundary condition {text!r}; expected alpha0,alpha1[,rhs]") from exc
    if len(parts) not in (2, 3):
        raise UsageError(f"bad boundary condition {text!r}; expected alpha0,alpha1[,rhs]")
    return RobinBC(*parts)


def _problem_params(args, config: dict) -> tuple[InvariantParams, RobinBC, RobinBC]:
    """Merge --config with command-line overrides."""
    d = dict(config)
    for key in ("a", "b", "c", "n"):
        val = getattr(args, key, None)
        if val is not None:
            d[key] = val
    if getattr(args, "b_hat", None) is not None:
        d.update(a=1.0, b=args.b_hat)
    if getattr(args, "c_hat", None) is not None:
        d.update(a=d.get("a", 1.0), c=args.c_hat * d.get("a", 1.0) ** 2)
    d.setdefault("a", 1.0)
    d.setdefault("n", 2)
    if "b" not in d or "c" not in d:
        raise UsageError("problem needs b and c (use --b-hat/--c-hat, --b/--c or --config)")
    bc = dict(d.get("bc", {}))
    kind = getattr(args, "bc", None)
    if kind == "dirichlet":
        bc = {"left": RobinBC.dirichlet().to_dict(), "right": RobinBC.dirichlet().to_dict()}
    elif kind == "neumann":
        s0, s1 = args.slopes
        bc = {"left": RobinBC.neumann(s0).to_dict(), "right": RobinBC.neumann(s1).to_dict()}
    if getattr(args, "left", None):
        bc["left"] = _parse_bc(args.left).to_dict()
    if getattr(args, "right", None):
        bc["right"] = _parse_bc(args.right).to_dict()
    d["bc"] = bc
    params, sp = problem_from_dict(d)
    return params, sp.left_bc, sp.right_bc


def _solver_config(args, config: dict) -> SolverConfig:
    d = dict(config.get("solver", {}))
    if getattr(args, "n_points", None):
        d["n_points"] = args.n_points
    if getattr(args, "lambda_scan", None):
        d["lambda_scan"] = tuple(args.lambda_scan)
    if "lambda_scan" in d:
        d["lambda_scan"] = tuple(d["lambda_scan"])
    return SolverConfig(**d)


def _closure(args, config: dict) -> ClosureCondition:
    d = dict(config.get("closure", {}))
    if getattr(args, "closure", None):
        d["kind"] = args.closure
    if getattr(args, "gamma", None) is not None:
        d["gamma"] = args.gamma
    return ClosureCondition(**d)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands


def cmd_estimate(args, config) -> int:
    params, left, right = _problem_params(args, config)
    norm = normalize_invariant(params)
    sol = build_landscape(norm.b_hat, norm.c_hat, left, right)
    res = estimate_lambda0(sol)
    payload = {
        "b_hat": norm.b_hat,
        "c_hat": norm.c_hat,
        "bc_kind": sol.bc_kind,
        "phi1": sol.phi1,
        "phi2": sol.phi2,
        "C1": sol.C1,
        "C2": sol.C2,
        "critical_points": critical_points(sol),
        "z_star": res.z_star,
        "w_max": res.w_max,
        "W_min": res.W_min,
        "lambda0_est": res.lambda0_est,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_solve(args, config) -> int:
    cfg = _solver_config(args, config)
    if args.bc == "neumann":
        params, _, _ = _problem_params(args, config)
        potential = InversePowerPotential(params.a, params.b, params.c, params.n)
        closure = _closure(args, config)
        pairs = slope_solutions(potential, args.slopes[0], args.slopes[1], closure, cfg, count=args.k_max + 1)
        header = f"# slope-prescribed mode, closure {closure.label}\n"
    else:
        params, left, right = _problem_params(args, config)
        if not (left.homogeneous and right.homogeneous):
            raise UsageError("eigenvalue problems need homogeneous boundary data (rhs = 0)")
        potential = InversePowerPotential(params.a, params.b, params.c, params.n)
        pairs = solve_robin_eigen(potential, left, right, k_max=args.k_max, cfg=cfg)
        header = ""
    sys.stdout.write(header)
    for p in pairs:
        sys.stdout.write(f"lambda{p.index} = {p.lam:.12g}  (nodes: {p.node_count})\n")
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["zhat"] + [f"y{p.index}" for p in pairs])
            for i, z in enumerate(pairs[0].grid):
                writer.writerow([fmt(float(z))] + [fmt(float(p.values[i])) for p in pairs])
    return EXIT_OK


def cmd_landscape(args, config) -> int:
    params, left, right = _problem_params(args, config)
    norm = normalize_invariant(params)
    sol = build_landscape(norm.b_hat, norm.c_hat, left, right)
    z = np.linspace(Z_LEFT, Z_RIGHT, args.points)
    w = sol.value(z)
    lines = ["zhat,w,W"]
    for zi, wi in zip(z, w):
        lines.append(f"{fmt(float(zi))},{fmt(float(wi))},{fmt(1.0 / wi) if wi > 0 else ''}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_transform(args, config) -> int:
    a = args.a if args.a is not None else config.get("a", 1.0)
    b = args.b if args.b is not None else config.get("b", 0.1)
    c = args.c if args.c is not None else config.get("c", 1.0)
    d = args.d if args.d is not None else origin_shift(a, b, c, args.branch)
    cp = build_canonical(a, b, c, d, args.branch)
    payload = {k: cp.to_dict()[k] for k in ("k", "d", "z0", "z1", "exponent", "base_factor")}
    payload["branch"] = cp.branch
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args, config) -> int:
    d = dict(config)
    bc_kind = args.bc or d.get("bc_kind", "dirichlet")
    c_list = tuple(args.c_hat_list or d.get("c_hat_list", (0.5, 1.0, 1.9)))
    b_range = tuple(args.b_range or d.get("b_hat_range", (0.1, 6.0, 0.1)))
    cfg = SweepConfig(
        bc_kind=bc_kind,
        c_hat_list=c_list,
        b_hat_range=b_range,
        closure=_closure(args, config),
        solver=_solver_config(args, config),
        slopes=tuple(args.slopes),
        jobs=args.jobs,
        out_path=args.out,
    )
    rows = run_sweep(cfg)
    if args.out:
        write_sweep_csv(rows, args.out, cfg.metadata())
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        from .sweep import SWEEP_COLUMNS

        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow(r.fields())
    failed = sum(r.failed for r in rows)
    if failed:
        log.error("%d of %d sweep rows failed", failed, len(rows))
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_figure(args, config) -> int:
    out = args.out or f"figure_{args.figure_id}.csv"
    emit_figure_data(args.figure_id, out, solver=_solver_config(args, config), closure=_closure(args, config))
    print(out)
    return EXIT_OK


def cmd_verify(args, config) -> int:
    results = verify_suite()
    return EXIT_OK if all(r.passed for r in results if r.gate) else EXIT_NUMERIC


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON problem/sweep configuration")
    common.add_argument("--out", help="output path (stdout when omitted)")
    common.add_argument("--seedless", action="store_true", help="accepted for compatibility; nothing here is random")
    common.add_argument("-v", "--verbose", action="store_true")

    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument("--a", type=float)
    problem.add_argument("--b", type=float)
    problem.add_argument("--c", type=float)
    problem.add_argument("--n", type=int)
    problem.add_argument("--b-hat", type=float, help="normalised shift (sets a=1)")
    problem.add_argument("--c-hat", type=float, help="normalised strength")
    problem.add_argument("--bc", choices=["dirichlet", "neumann"], help="shorthand boundary data")
    problem.add_argument("--left", help="left Robin data alpha0,alpha1[,rhs]")
    problem.add_argument("--right", help="right Robin data alpha0,alpha1[,rhs]")
    problem.add_argument("--slopes", type=float, nargs=2, default=(1.0, -1.0), metavar=("S0", "S1"),
                         help="end slopes for --bc neumann (default 1 -1)")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--n-points", type=int)
    solver.add_argument("--lambda-scan", type=float, nargs=3, metavar=("LO", "HI", "STEP"))
    solver.add_argument("--closure", choices=["unit_l2", "left_value", "right_value"])
    solver.add_argument("--gamma", type=float, help="value used by left_value/right_value closures")

    parser = argparse.ArgumentParser(prog="pdha", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", parents=[common, problem], help="landscape estimate of lambda0")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("solve", parents=[common, problem, solver], help="numerical eigenpairs")
    p.add_argument("--k-max", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("landscape", parents=[common, problem], help="landscape CSV (zhat,w,W)")
    p.add_argument("--points", type=int, default=1001)
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("transform", parents=[common], help="canonical problem behind the potential")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--d", type=float, help="shift (default: the one putting z0 at 0)")
    p.add_argument("--branch", choices=["plus", "minus"], default="minus")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("sweep", parents=[common, solver], help="estimate vs numerics over (c_hat, b_hat)")
    p.add_argument("--bc", choices=["dirichlet", "neumann"])
    p.add_argument("--c-hat-list", type=float, nargs="+")
    p.add_argument("--b-range", type=float, nargs=3, metavar=("LO", "HI", "STEP"))
    p.add_argument("--slopes", type=float, nargs=2, default=(1.0, -1.0), metavar=("S0", "S1"))
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", parents=[common, solver], help="data behind a figure panel")
    p.add_argument("figure_id", choices=sorted(FIGURES))
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PdhaError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
