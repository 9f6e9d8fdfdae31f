#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import pytest

from lvphase.config.parser import RunConfig
from lvphase.core.commands import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, run_command
from lvphase.main import main
from lvphase.models.data_models import AuditReport
from lvphase.utils.csv_io import read_csv_artifact


def _run(tmp_path, *args, name="out.csv"):
    out = tmp_path / name
    code = main([*args, "--quiet", "--out", str(out)])
    return code, out


def test_isotherm_below_critical_has_a_plateau(tmp_path):
    code, out = _run(tmp_path, "isotherm", "--set", "run.isotherm.theta=0.8", "--set", "run.isotherm.n=21")
    assert code == EXIT_OK
    artifact = read_csv_artifact(str(out))
    assert artifact.columns == ["p", "nu", "phi", "branch"]
    assert artifact.column("branch").count("plateau") == 2
    assert artifact.metadata["command"] == "isotherm"
    assert artifact.metadata["config"]["run"]["isotherm"]["theta"] == 0.8


def test_supercritical_isotherm_has_no_plateau(tmp_path):
    code, out = _run(tmp_path, "isotherm", "--set", "R=10", "--set", "run.isotherm.theta=1.2",
                     "--set", "run.isotherm.n=21")
    assert code == EXIT_OK
    branches = read_csv_artifact(str(out)).column("branch")
    assert "plateau" not in branches
    assert set(branches) == {"fluid"}


def test_supercritical_isotherm_of_the_default_model(tmp_path):
    code, out = _run(tmp_path, "isotherm", "--set", "run.isotherm.theta=1.2", "--set", "run.isotherm.n=21")
    assert code == EXIT_OK
    artifact = read_csv_artifact(str(out))
    assert "plateau" not in artifact.column("branch")
    assert all(nu > 0 for nu in artifact.column("nu"))


def test_run_file_and_overrides(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[model]\nkind = quartic\n\n[run.minima]\ntheta = 0.5\n", encoding="utf-8")
    code, out = _run(tmp_path, "minima", "--config", str(cfg), "--set", "run.minima.theta=0.4")
    assert code == EXIT_OK
    artifact = read_csv_artifact(str(out))
    assert artifact.metadata["config"]["model"]["kind"] == "quartic"
    assert artifact.metadata["config"]["run"]["minima"]["theta"] == 0.4
    assert artifact.column("kind").count("minimum") == 2


def test_minima_output_is_deterministic(tmp_path):
    _, first = _run(tmp_path, "minima", name="a.csv")
    _, second = _run(tmp_path, "minima", name="b.csv")
    assert first.read_text(encoding="utf-8") == second.read_text(encoding="utf-8")


def test_hysteresis_artifact(tmp_path):
    code, out = _run(tmp_path, "hysteresis", "--set", "run.hysteresis.n_steps=41")
    assert code == EXIT_OK
    artifact = read_csv_artifact(str(out))
    assert artifact.columns == ["h_over_a", "phi", "branch"]
    assert len(artifact.rows) == 81
    assert set(artifact.column("branch")) == {"liquid", "vapour"}


def test_phase_diagram_artifact(tmp_path):
    code, out = _run(tmp_path, "phase-diagram", "--set", "run.phase-diagram.n_u=3",
                     "--set", "run.phase-diagram.n_h=4")
    assert code == EXIT_OK
    artifact = read_csv_artifact(str(out))
    assert artifact.columns == ["u", "h_over_a", "n_minima"]
    assert len(artifact.rows) == 12
    assert set(artifact.column("n_minima")) <= {1.0, 2.0}


def test_spinodal_artifact(tmp_path):
    code, out = _run(tmp_path, "spinodal", "--set", "run.spinodal.n=4")
    assert code == EXIT_OK
    artifact = read_csv_artifact(str(out))
    assert len(artifact.rows) == 4
    assert all(h > 0 for h in artifact.column("h_plus"))


def test_relax_artifact(tmp_path):
    code, out = _run(tmp_path, "relax", "--set", "run.relax.t_end=5")
    assert code == EXIT_OK
    artifact = read_csv_artifact(str(out))
    assert artifact.columns == ["t", "phi", "p", "nu", "f", "dissipation", "balance_residual"]
    assert artifact.column("t")[-1] == 5.0


def test_thermal_artifact(tmp_path):
    code, out = _run(tmp_path, "thermal", "--set", "c=10", "--set", "run.thermal.t_end=2")
    assert code == EXIT_OK
    assert read_csv_artifact(str(out)).columns[-2:] == ["theta", "eta"]


def test_pde1d_artifact(tmp_path):
    code, out = _run(tmp_path, "pde1d", "--set", "run.pde1d.n=51", "--set", "run.pde1d.dx=0.2",
                     "--set", "run.pde1d.initial=tanh", "--set", "run.pde1d.t_end=1")
    assert code == EXIT_OK
    artifact = read_csv_artifact(str(out))
    series = artifact.column("series")
    assert series.count("profile") == 51
    assert "energy" in series


def test_pde1d_unstable_step_is_a_runtime_error(tmp_path, capsys):
    code, _ = _run(tmp_path, "pde1d", "--set", "run.pde1d.dt=1")
    assert code == EXIT_RUNTIME
    assert "StabilityViolation" in capsys.readouterr().err


@pytest.mark.parametrize("override", ["a=-1", "alpha=1", "run.isotherm.n=1", "a"])
def test_configuration_errors_exit_with_usage(tmp_path, override, capsys):
    code, out = _run(tmp_path, "isotherm", "--set", override)
    assert code == EXIT_USAGE
    assert not out.exists()
    assert capsys.readouterr().err


def test_missing_run_file(tmp_path):
    code, _ = _run(tmp_path, "minima", "--config", str(tmp_path / "missing.cfg"))
    assert code == EXIT_USAGE


def test_run_file_that_is_not_utf8(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_bytes(b"[model]\nkind = quartic\xff\n")
    code, out = _run(tmp_path, "minima", "--config", str(cfg))
    assert code == EXIT_USAGE
    assert not out.exists()
    assert "ParseError" in capsys.readouterr().err


def test_unknown_subcommand():
    assert main(["bogus"]) == EXIT_USAGE


def test_run_command_rejects_unknown_command(tmp_path):
    assert run_command("bogus", RunConfig(), str(tmp_path / "x.csv")) == EXIT_USAGE


@pytest.mark.slow
def test_validate_command(tmp_path, capsys):
    code, out = _run(tmp_path, "validate", "--seed", "3", "--set", "run.validate.n_samples=20",
                     "--set", "run.validate.n_pairs=20")
    assert code == EXIT_OK
    artifact = read_csv_artifact(str(out))
    assert tuple(artifact.columns) == tuple(AuditReport.CSV_COLUMNS)
    assert artifact.column("pass") == [1.0] * 8
    assert artifact.metadata["seed"] == 3
    assert "Audit summary" in capsys.readouterr().err
