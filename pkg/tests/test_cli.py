import subprocess
import sys

import pytest

from dgader import io
from dgader.cli import main

ADVECTION = """
law = advection
N = 20
degree = 1
integrator = ssp2
t_end = 0.1
ic = sine
offset = 1.5
"""


@pytest.fixture
def config(tmp_path):
    def write(text, name="run.cfg"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_run_success(config, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", config(ADVECTION), "--output-dir", str(out)]) == 0
    assert "steps=" in capsys.readouterr().out
    assert (out / "snapshot_final.csv").exists()
    assert (out / "snapshot_final_coeffs.csv").exists()


def test_quiet_run(config, capsys):
    assert main(["run", config(ADVECTION), "--quiet"]) == 0
    assert capsys.readouterr().out == ""


def test_converge_writes_table(config, tmp_path, capsys):
    out = tmp_path / "conv"
    assert main(["converge", config(ADVECTION), "--meshes", "10,20,40",
                 "--output-dir", str(out)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "N,L1,L2,Linf,order_L1,order_L2,order_Linf"
    assert len(lines) == 4
    rows = io.read_error_table(out / "snapshot_errors.csv")
    assert rows[-1]["order_L2"] > 1.7


def test_converge_uses_config_meshes(config, capsys):
    assert main(["converge", config(ADVECTION + "meshes = 10,20\n"), "--quiet"]) == 0


@pytest.mark.parametrize("args", [
    ["converge", None, "--meshes", "10,15"],
    ["converge", None, "--meshes", "10,x"],
    ["converge", None],
])
def test_converge_config_errors(config, args, capsys):
    args = [a if a is not None else config(ADVECTION) for a in args]
    assert main(args) == 1
    assert "config error" in capsys.readouterr().err


def test_bad_config_exit_code(config, tmp_path):
    assert main(["run", config("law = plasma\n")]) == 1
    assert main(["run", str(tmp_path / "nope.cfg")]) == 1


def test_solver_failure_exit_code(config, capsys):
    text = """
law = euler
ic = double_rarefaction
boundary = transmissive
N = 40
degree = 2
cfl = 1.0
t_end = 0.1
max_retries = 0
"""
    assert main(["run", config(text)]) == 2
    assert "solver error" in capsys.readouterr().err


def test_module_entry_point(config):
    proc = subprocess.run([sys.executable, "-m", "dgader", "run", config(ADVECTION), "--quiet"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


CONFIG_DIR = __import__("pathlib").Path(__file__).resolve().parents[1] / "configs"


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.cfg")), ids=lambda p: p.name)
def test_shipped_configs_are_valid(path):
    from dgader.config import load_config
    from dgader.driver import Problem
    cfg = load_config(path)
    Problem(cfg.replace(N=8)).initial_solution()
