import math
import os
import subprocess
from pathlib import Path

import pytest

elfv = pytest.importorskip("elfv")

CLI = os.environ.get("ELFV_CLI")
CONFIGS = Path(os.environ.get("ELFV_CONFIGS", Path(__file__).resolve().parents[2] / "configs"))


def test_flux_at_a_shock():
    nu, alpha, fhat = elfv.numerical_flux(2.0, -1.0)
    assert nu == 0.5
    assert alpha == 0.0
    assert fhat == pytest.approx(1.0, abs=1e-15)


def test_step_keeps_mass_and_bounds():
    grid = elfv.Grid1D(0.0, 2 * math.pi, 64, elfv.Boundary.PERIODIC)
    u = [math.sin(grid.cell_center(j)) + 0.3 for j in range(64)]
    dt = elfv.time_step(u, grid)
    new, diag = elfv.step(u, grid, dt)
    assert len(new) == 64
    assert sum(new) == pytest.approx(sum(u), abs=1e-12)
    assert min(u) - 1e-12 <= diag["min"] and diag["max"] <= max(u) + 1e-12
    assert diag["tv"] <= elfv.total_variation(u) + 1e-12


def test_bad_grid_raises():
    with pytest.raises(elfv.InvalidArgument):
        elfv.Grid1D(0.0, 1.0, 3)


def test_shock_run_keeps_tv():
    cfg = elfv.parse_config("problem = shock\nn_cells = 100\nc_factor = 3.9\n")
    s = elfv.run_experiment(cfg)
    assert s.exit_code == 0
    assert all(abs(h["tv"] - 3.0) <= 1e-10 for h in s.history)


def test_rarefaction_error():
    cfg = elfv.ExperimentConfig()
    cfg.problem = "rarefaction"
    cfg.n_cells = 100
    s = elfv.run_experiment(cfg)
    assert s.error is not None and s.error < 0.05


def test_unknown_key_rejected():
    with pytest.raises(elfv.InvalidArgument):
        elfv.parse_config("problem = shock\nc_factr = 3\n")


def test_convergence_rows():
    cfg = elfv.parse_config("problem = sin\nt_final = 0.8\n")
    rows = elfv.convergence_study(cfg, [100, 200])
    assert [r[0] for r in rows] == [100, 200]
    assert rows[0][2] is None
    assert rows[1][1] < rows[0][1]


def test_theory_smoke():
    r = elfv.verify_theory(200, 3)
    assert r["instances"] == 200 and r["all_ok"]


def test_run_writes_readable_csvs(tmp_path):
    cfg = elfv.parse_config(
        "name = q\nproblem = quadrant\nn_cells = 20\nt_final = 0.02\n"
        "outputs = snapshots, tv_history\n"
    )
    s = elfv.run_experiment(cfg, tmp_path)
    names = {Path(p).name for p in s.files}
    assert "q_diagnostics.csv" in names
    diag = elfv.read_csv(tmp_path / "q_diagnostics.csv")
    assert diag["step"][0] == 0
    snap = next(p for p in s.files if "_snapshot_t" in str(p))
    data = elfv.read_csv(snap)
    assert len(data["u"]) == 400 and "y" in data


@pytest.mark.skipif(not CLI, reason="CLI path not given")
def test_cli_outputs_match_schemas(tmp_path):
    cmds = [
        ["run", "--config", CONFIGS / "shock_c3.9.ini"],
        ["converge", "--config", CONFIGS / "sin_table.ini"],
        ["sweep", "--config", CONFIGS / "sin_sweep.ini"],
        ["verify-theory", "--config", CONFIGS / "theory.ini", "--instances", "50"],
    ]
    for c in cmds:
        subprocess.run([CLI, *map(str, c), "--out", str(tmp_path)], check=True, capture_output=True)
    files = sorted(tmp_path.glob("*.csv"))
    kinds = set()
    for f in files:
        kind = elfv.csvio.kind_of(f)
        kinds.add(kind)
        table = elfv.read_csv(f, kind)
        assert list(table) == elfv.SCHEMAS[kind]
    assert {"diagnostics", "snapshot1d", "error", "sweep", "theory"} <= kinds


def test_schema_mismatch_names_the_column(tmp_path):
    bad = tmp_path / "x_diagnostics.csv"
    bad.write_text("step,time,tv,min,max,n_etcs\n0,0,1,0,1,0\n")
    with pytest.raises(elfv.SchemaError, match="'mass'"):
        elfv.read_csv(bad)
