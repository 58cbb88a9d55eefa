import json
import math

import pytest

from pdha.eigensolver import SolverConfig
from pdha.errors import ResonantCase
from pdha.sweep import (
    SWEEP_COLUMNS,
    SweepConfig,
    b_hat_grid,
    fmt,
    read_sweep_csv,
    rows_as_array,
    run_sweep,
    write_sweep_csv,
)


def test_default_grid_spans_figures():
    grid = b_hat_grid(0.1, 6.0, 0.1)
    assert len(grid) == 60 and grid[0] == 0.1 and grid[-1] == 6.0
    assert 0.3 in grid and 0.5 in grid


def test_fmt():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(math.nan) == "" and fmt(None) == ""
    assert fmt(2.0) == "2"


def test_config_validation():
    with pytest.raises(ResonantCase):
        SweepConfig(c_hat_list=(2.0,))
    with pytest.raises(ValueError):
        SweepConfig(b_hat_range=(0.0, 1.0, 0.1))
    with pytest.raises(ValueError):
        SweepConfig(bc_kind="periodic")


def test_parallel_schedule_gives_identical_bytes(tmp_path):
    base = dict(bc_kind="dirichlet", c_hat_list=(0.5, 1.9), b_hat_range=(0.1, 1.0, 0.3))
    serial = write_sweep_csv(run_sweep(SweepConfig(**base)), tmp_path / "s.csv")
    parallel = write_sweep_csv(run_sweep(SweepConfig(**base, jobs=3)), tmp_path / "p.csv")
    assert serial.read_bytes() == parallel.read_bytes()


def test_rows_and_metadata(tmp_path):
    cfg = SweepConfig(bc_kind="neumann", c_hat_list=(1.0,), b_hat_range=(0.3, 0.5, 0.2))
    rows = run_sweep(cfg)
    assert [(r.c_hat, r.b_hat) for r in rows] == [(1.0, 0.3), (1.0, 0.5)]
    assert not any(r.failed for r in rows)
    assert rows_as_array(rows, "lambda0_num")[0] == pytest.approx(1.5336, abs=1e-3)
    path = write_sweep_csv(rows, tmp_path / "n.csv", cfg.metadata())
    back = read_sweep_csv(path)
    assert tuple(back[0]) == SWEEP_COLUMNS and back[0]["closure"] == "unit_l2"
    meta = json.loads((tmp_path / "n.csv.meta.json").read_text())
    assert meta["b_hat_grid"] == {"lo": 0.3, "hi": 0.5, "step": 0.2}
    assert meta["slopes"] == [1.0, -1.0]


def test_failed_rows_are_tagged():
    cfg = SweepConfig(c_hat_list=(1.0,), b_hat_range=(0.1, 0.1, 0.1), solver=SolverConfig(lambda_scan=(0.0, 2.0, 0.25)))
    (row,) = run_sweep(cfg)
    assert row.failed and row.error == "numeric:BracketExhausted"
    assert math.isfinite(row.lambda0_est) and row.fields()[4] == ""
