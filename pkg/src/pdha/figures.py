"""CSV data behind each published figure panel.

Column headers carry the curve parameters as ``name@key=value;key=value`` so
that a file can be re-read and its parameter sets recovered exactly.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .core import Z_LEFT, Z_RIGHT, InversePowerPotential, RobinBC
from .eigensolver import ClosureCondition, SolverConfig, slope_solutions, solve_robin_eigen
from .errors import UnknownFigure
from .landscape import build_landscape
from .liouville import build_canonical, origin_shift
from .sweep import SweepConfig, fmt, run_sweep, write_sweep_csv

CURVE_POINTS = 1001
NEUMANN_SLOPES = (1.0, -1.0)

# parameter sets as given in the figure captions
FIGURES: dict[str, dict] = {
    "1a": {"kind": "invariant", "vary": "b", "values": (0.1, 0.5, 1.0, 2.0), "fixed": {"a": 1.0, "c": 1.0}},
    "1b": {"kind": "invariant", "vary": "c", "values": (0.1, 1.0, 1.9), "fixed": {"a": 1.0, "b": 1.0}},
    "2a": {"kind": "coefficient_u", "params": {"a": 1.0, "b": 0.1, "c": 1.0, "branch": "minus"}},
    "2b": {"kind": "invariant", "vary": "b", "values": (0.1,), "fixed": {"a": 1.0, "c": 1.0}},
    "3a": {"kind": "landscape", "bc": "dirichlet", "field": "w", "c_hat": 1.0, "b_hat": (0.1, 1.0, 2.0)},
    "3b": {"kind": "landscape", "bc": "dirichlet", "field": "W", "c_hat": 1.0, "b_hat": (0.1, 1.0, 2.0)},
    "4a": {"kind": "landscape", "bc": "neumann", "field": "w", "c_hat": 1.0, "b_hat": (0.3, 1.0, 2.0)},
    "4b": {"kind": "landscape", "bc": "neumann", "field": "W", "c_hat": 1.0, "b_hat": (0.3, 1.0, 2.0)},
    "5a": {"kind": "sweep", "bc": "dirichlet", "c_hat": (0.5, 1.0, 1.9)},
    "5b": {"kind": "sweep", "bc": "neumann", "c_hat": (1.0,)},
    "6a": {"kind": "sweep", "bc": "neumann", "c_hat": (0.1,)},
    "6b": {"kind": "sweep", "bc": "neumann", "c_hat": (1.9,)},
    "7a": {"kind": "eigenfunction", "bc": "dirichlet", "order": 0, "c_hat": 1.0, "b_hat": (0.1, 0.5, 6.0)},
    "7b": {"kind": "eigenfunction", "bc": "dirichlet", "order": 1, "c_hat": 1.0, "b_hat": (0.1, 0.5, 6.0)},
    "8a": {"kind": "eigenfunction", "bc": "neumann", "order": 0, "c_hat": 1.0, "b_hat": (0.3, 0.5, 6.0)},
    "8b": {"kind": "eigenfunction", "bc": "neumann", "order": 1, "c_hat": 1.0, "b_hat": (0.3, 0.5, 6.0)},
}


def column_name(name: str, **params) -> str:
    return name + "@" + ";".join(f"{k}={fmt(v) if not isinstance(v, str) else v}" for k, v in params.items())


def parse_column(col: str) -> tuple[str, dict]:
    if "@" not in col:
        return col, {}
    name, rest = col.split("@", 1)
    params = {}
    for item in rest.split(";"):
        k, v = item.split("=", 1)
        try:
            params[k] = float(v)
        except ValueError:
            params[k] = v
    return name, params


def figure_parameters(path) -> list[tuple[str, dict]]:
    with Path(path).open(newline="") as fh:
        header = next(csv.reader(fh))
    return [parse_column(c) for c in header]


def _write_columns(path: Path, header: list[str], columns: list[np.ndarray]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([fmt(float(v)) for v in row])
    return path


def _landscape_bcs(bc: str):
    if bc == "dirichlet":
        return RobinBC.dirichlet(), RobinBC.dirichlet()
    return RobinBC.neumann(NEUMANN_SLOPES[0]), RobinBC.neumann(NEUMANN_SLOPES[1])


def emit_figure_data(figure_id: str, out_path, solver: SolverConfig | None = None, closure: ClosureCondition | None = None) -> Path:
    if figure_id not in FIGURES:
        raise UnknownFigure(f"unknown figure {figure_id!r}; choose from {', '.join(FIGURES)}")
    spec = FIGURES[figure_id]
    out = Path(out_path)
    solver = solver or SolverConfig()
    closure = closure or ClosureCondition()
    kind = spec["kind"]
    z = np.linspace(Z_LEFT, Z_RIGHT, CURVE_POINTS)

    if kind == "invariant":
        header, cols = ["zhat"], [z]
        for val in spec["values"]:
            p = {**spec["fixed"], spec["vary"]: val}
            header.append(column_name("q", a=p["a"], b=p["b"], c=p["c"]))
            cols.append(InversePowerPotential(p["a"], p["b"], p["c"], 2)(z))
        return _write_columns(out, header, cols)

    if kind == "coefficient_u":
        p = spec["params"]
        d = origin_shift(p["a"], p["b"], p["c"], p["branch"])
        cp = build_canonical(p["a"], p["b"], p["c"], d, p["branch"])
        zz = np.linspace(cp.z0, cp.z1, CURVE_POINTS)
        header = ["z", column_name("u", a=p["a"], b=p["b"], c=p["c"], branch=p["branch"])]
        return _write_columns(out, header, [zz, cp.u(zz)])

    if kind == "landscape":
        header, cols = ["zhat"], [z]
        left, right = _landscape_bcs(spec["bc"])
        for bh in spec["b_hat"]:
            w = build_landscape(bh, spec["c_hat"], left, right).value(z)
            if spec["field"] == "w":
                cols.append(w)
            else:
                with np.errstate(divide="ignore"):
                    cols.append(np.where(w > 0, 1.0 / np.where(w > 0, w, 1.0), math.nan))
            header.append(column_name(spec["field"], c_hat=spec["c_hat"], b_hat=bh))
        return _write_columns(out, header, cols)

    if kind == "sweep":
        cfg = SweepConfig(bc_kind=spec["bc"], c_hat_list=spec["c_hat"], closure=closure, solver=solver,
                          slopes=NEUMANN_SLOPES)
        return write_sweep_csv(run_sweep(cfg), out, cfg.metadata())

    # eigenfunction panels
    order = spec["order"]
    header, cols = ["zhat"], [solver.grid]
    for bh in spec["b_hat"]:
        potential = InversePowerPotential(1.0, bh, spec["c_hat"], 2)
        if spec["bc"] == "dirichlet":
            pair = solve_robin_eigen(potential, RobinBC.dirichlet(), RobinBC.dirichlet(), k_max=order, cfg=solver)[order]
        else:
            pair = slope_solutions(potential, *NEUMANN_SLOPES, closure, solver, count=order + 1)[order]
        cols.append(pair.values)
        header.append(column_name(f"y{order}", c_hat=spec["c_hat"], b_hat=bh, **{"lambda": pair.lam}))
    return _write_columns(out, header, cols)
