import json
import subprocess
import sys

import pytest

from pdha.cli import main


def run(*args):
    return subprocess.run([sys.executable, "-m", "pdha", *args], capture_output=True, text=True)


def test_solve_prints_and_writes(tmp_path, capsys):
    out = tmp_path / "e.csv"
    assert main(["solve", "--b-hat", "0.1", "--c-hat", "1", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "lambda0 = 1.5198658" in text and "lambda1 = 4.9433098" in text
    assert out.read_text().splitlines()[0] == "zhat,y0,y1"


def test_estimate_json(capsys):
    assert main(["estimate", "--b-hat", "0.1", "--c-hat", "1", "--bc", "dirichlet"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["lambda0_est"] > 1.5198658
    assert payload["phi1"] == pytest.approx(1.6180339887498949)


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"a": 2.0, "b": 0.2, "c": 4.0}))
    assert main(["estimate", "--config", str(cfg)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["b_hat"] == 0.1 and payload["c_hat"] == 1.0


def test_landscape_csv(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["landscape", "--b-hat", "1", "--c-hat", "0.5", "--points", "11", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "zhat,w,W" and len(lines) == 12
    assert lines[1].endswith(",")  # W is blank where w is not positive


def test_transform(capsys):
    assert main(["transform", "--a", "1", "--b", "0.1", "--c", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["z1"] == pytest.approx(34.4068, abs=1e-3)
    assert payload["z0"] == pytest.approx(0.0, abs=1e-12)


def test_sweep_to_stdout(capsys):
    code = main(["sweep", "--c-hat-list", "1", "--b-range", "0.1", "0.2", "0.1"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0 and len(lines) == 3 and lines[0].startswith("bc_kind,c_hat,b_hat")


def test_usage_errors_exit_1():
    assert run("solve").returncode == 1
    assert run("bogus").returncode == 1
    assert run("estimate", "--b-hat", "1", "--c-hat", "2").returncode == 1
    assert run("estimate", "--config", "/nonexistent.json").returncode == 1


def test_numerical_failure_exits_2():
    proc = run("solve", "--b-hat", "0.1", "--c-hat", "1", "--lambda-scan", "0", "2", "0.25")
    assert proc.returncode == 2
    assert "BracketExhausted" in proc.stderr


def test_figure_command(tmp_path):
    out = tmp_path / "f.csv"
    proc = run("figure", "1b", "--out", str(out))
    assert proc.returncode == 0 and out.exists()


def test_help():
    proc = run("--help")
    assert proc.returncode == 0
    for cmd in ("estimate", "solve", "landscape", "transform", "sweep", "figure", "verify"):
        assert cmd in proc.stdout


@pytest.mark.parametrize("gate_ok, code", [(True, 0), (False, 2)])
def test_verify_exit_code_follows_gated_checks(monkeypatch, gate_ok, code):
    from pdha import cli
    from pdha.verify import Check

    results = [Check("gated", gate_ok, ""), Check("report only", False, "", gate=False)]
    monkeypatch.setattr(cli, "verify_suite", lambda: results)
    assert main(["verify"]) == code
