"""Parameter sweeps comparing the landscape estimate with numerical eigenvalues."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Literal, Sequence

import numpy as np

from .core import InversePowerPotential, RobinBC
from .eigensolver import ClosureCondition, SolverConfig, slope_solutions, solve_robin_eigen
from .errors import PdhaError, ResonantCase
from .landscape import build_landscape, estimate_lambda0

SWEEP_COLUMNS = (
    "bc_kind",
    "c_hat",
    "b_hat",
    "lambda0_est",
    "lambda0_num",
    "lambda1_num",
    "rel_overestimate",
    "closure",
    "error",
)


def fmt(x) -> str:
    """12 significant digits; NaN and None become an empty field."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if not math.isfinite(x):
        return ""
    return f"{x:.12g}"


def b_hat_grid(lo: float, hi: float, step: float) -> list[float]:
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 10) for i in range(n + 1)]


@dataclass(frozen=True)
class SweepConfig:
    bc_kind: Literal["dirichlet", "neumann"] = "dirichlet"
    c_hat_list: tuple[float, ...] = (0.5, 1.0, 1.9)
    b_hat_range: tuple[float, float, float] = (0.1, 6.0, 0.1)
    closure: ClosureCondition = field(default_factory=ClosureCondition)
    solver: SolverConfig = field(default_factory=SolverConfig)
    out_path: str | None = None
    # slopes w'(0), w'(pi) for the landscape and y'(0), y'(pi) for the eigenfunctions
    slopes: tuple[float, float] = (1.0, -1.0)
    jobs: int = 1

    def __post_init__(self) -> None:
        lo, hi, step = self.b_hat_range
        if not lo > 0:
            raise ValueError("b_hat range must start above zero")
        if not step > 0 or hi < lo:
            raise ValueError(f"bad b_hat range {self.b_hat_range}")
        if self.bc_kind not in ("dirichlet", "neumann"):
            raise ValueError(f"bc_kind must be dirichlet or neumann, got {self.bc_kind!r}")
        if any(c == 2 for c in self.c_hat_list):
            raise ResonantCase("c_hat = 2 is excluded from sweeps")

    def cases(self) -> list[tuple[float, float]]:
        return [(c, b) for c in self.c_hat_list for b in b_hat_grid(*self.b_hat_range)]

    def metadata(self) -> dict:
        return {
            "bc_kind": self.bc_kind,
            "c_hat_list": list(self.c_hat_list),
            "b_hat_grid": {"lo": self.b_hat_range[0], "hi": self.b_hat_range[1], "step": self.b_hat_range[2]},
            "closure": self.closure.label if self.bc_kind == "neumann" else None,
            "slopes": list(self.slopes) if self.bc_kind == "neumann" else None,
            "solver": asdict(self.solver),
        }


@dataclass(frozen=True)
class SweepRow:
    bc_kind: str
    c_hat: float
    b_hat: float
    lambda0_est: float = math.nan
    lambda0_num: float = math.nan
    lambda1_num: float = math.nan
    rel_overestimate: float = math.nan
    closure: str = ""
    error: str = ""

    @property
    def failed(self) -> bool:
        return bool(self.error)

    def fields(self) -> list[str]:
        return [fmt(getattr(self, c)) for c in SWEEP_COLUMNS]


def _one_row(cfg: SweepConfig, c_hat: float, b_hat: float) -> SweepRow:
    closure = cfg.closure.label if cfg.bc_kind == "neumann" else ""
    est = l0 = l1 = math.nan
    errors = []
    potential = InversePowerPotential(1.0, b_hat, c_hat, 2)
    if cfg.bc_kind == "dirichlet":
        left, right = RobinBC.dirichlet(), RobinBC.dirichlet()
    else:
        left, right = RobinBC.neumann(cfg.slopes[0]), RobinBC.neumann(cfg.slopes[1])
    try:
        est = estimate_lambda0(build_landscape(b_hat, c_hat, left, right)).lambda0_est
    except PdhaError as exc:
        errors.append(f"estimate:{type(exc).__name__}")
    try:
        if cfg.bc_kind == "dirichlet":
            pairs = solve_robin_eigen(potential, left, right, k_max=1, cfg=cfg.solver)
        else:
            pairs = slope_solutions(potential, cfg.slopes[0], cfg.slopes[1], cfg.closure, cfg.solver, count=2)
        l0, l1 = pairs[0].lam, pairs[1].lam
    except PdhaError as exc:
        errors.append(f"numeric:{type(exc).__name__}")
    rel = (est - l0) / l0 if math.isfinite(est) and math.isfinite(l0) and l0 != 0 else math.nan
    return SweepRow(cfg.bc_kind, c_hat, b_hat, est, l0, l1, rel, closure, ";".join(errors))


def _row_task(args):
    return _one_row(*args)


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Rows in (c_hat, b_hat) order, whatever the execution schedule."""
    tasks = [(cfg, c, b) for c, b in cfg.cases()]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_row_task, tasks, chunksize=4))
    return [_one_row(*t) for t in tasks]


def write_sweep_csv(rows: Sequence[SweepRow], path, metadata: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow(row.fields())
    if metadata is not None:
        meta_path = path.with_name(path.name + ".meta.json")
        meta_path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n")
    return path


def read_sweep_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def rows_as_array(rows: Sequence[SweepRow], column: str) -> np.ndarray:
    return np.array([getattr(r, column) for r in rows], dtype=float)
