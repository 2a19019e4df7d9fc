"""Command-line interface: outputs, formats and exit codes."""
import json
import math
import subprocess
import sys

import pytest

from optoring import CSV_HEADER, default_config
from optoring.cli import main


def _write_config(tmp_path, name="cfg.json", **over):
    raw = default_config()
    raw["delta_sideband"] = "red"
    raw.update(over)
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


def _fast_bare(tmp_path):
    # uncoupled, fast mechanics: cheap time-domain runs
    return _write_config(tmp_path, g_rad_s=0.0, J_hz=0.0, gamma_hz=1e5)


def test_steady_prints_json(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    assert main(["steady", "--config", cfg]) == 0
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {"A0", "C0", "B0", "N", "delta_eff", "residual",
                        "used_bisection"}
    assert out["N"] > 0
    assert out["residual"] <= 1e-10


def test_spectrum_writes_csv(tmp_path):
    cfg = _write_config(tmp_path)
    out = tmp_path / "spec.csv"
    code = main(["spectrum", "--config", cfg, "--points", "5",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 6
    # spectrum leaves the delay columns empty markers
    assert lines[1].split(",")[5] == "nan"


def test_spectrum_stdout_default(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    assert main(["spectrum", "--config", cfg, "--points", "3"]) == 0
    out = capsys.readouterr().out
    assert out.startswith(CSV_HEADER)
    assert len(out.splitlines()) == 4


def test_delay_fills_tau(tmp_path):
    cfg = _write_config(tmp_path)
    out = tmp_path / "delay.csv"
    assert main(["delay", "--config", cfg, "--points", "3",
                 "--out", str(out)]) == 0
    for line in out.read_text().splitlines()[1:]:
        cols = line.split(",")
        assert math.isfinite(float(cols[5]))
        assert math.isfinite(float(cols[6]))


def test_custom_window_flags(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    assert main(["spectrum", "--config", cfg, "--points", "3",
                 "--from", "0.5", "--to", "1.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert float(lines[1].split(",")[0]) == pytest.approx(0.5)
    assert float(lines[-1].split(",")[0]) == pytest.approx(1.5)


def test_json_format(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    assert main(["spectrum", "--config", cfg, "--points", "3",
                 "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 3
    assert rows[0]["status"] == "ok"


def test_scenario_writes_default_name(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["scenario", "fig2a", "--points", "3"]) == 0
    assert (tmp_path / "fig2a.csv").exists()
    assert "fig2a.csv" in capsys.readouterr().out


def test_scenario_explicit_out(tmp_path):
    out = tmp_path / "panel.csv"
    assert main(["scenario", "fig3d", "--points", "3", "--out", str(out)]) == 0
    assert out.read_text().startswith(CSV_HEADER)


def test_validate_report(tmp_path, capsys):
    cfg = _fast_bare(tmp_path)
    assert main(["validate", "--config", cfg, "--points", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["compared"] == 3
    assert report["within_tolerance"] == 3
    for row in report["rows"]:
        assert row["status"] == "ok"
        assert row["rel_err"] <= 1e-3


def test_missing_config_is_config_error(tmp_path, capsys):
    assert main(["steady", "--config", str(tmp_path / "nope.json")]) == 1
    assert "error" in capsys.readouterr().err


def test_malformed_config_is_config_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["steady", "--config", str(path)]) == 1


def test_unknown_scenario_is_config_error(capsys):
    assert main(["scenario", "fig9z"]) == 1


def test_bad_points_is_config_error(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    assert main(["spectrum", "--config", cfg, "--points", "1"]) == 1


def test_missing_required_key_is_config_error(tmp_path, capsys):
    raw = default_config()
    del raw["kappa_hz"]
    raw["delta_sideband"] = "red"
    path = tmp_path / "short.json"
    path.write_text(json.dumps(raw))
    assert main(["steady", "--config", str(path)]) == 1
    assert "kappa_hz" in capsys.readouterr().err


def test_whole_run_failure_is_numerical_error(tmp_path, capsys, monkeypatch):
    import optoring.sweep as sweep_mod

    def boom(params, drives):
        raise RuntimeError("synthetic instability")

    monkeypatch.setattr(sweep_mod, "solve_steady_state", boom)
    cfg = _write_config(tmp_path)
    assert main(["spectrum", "--config", cfg, "--points", "3"]) == 2
    assert "error" in capsys.readouterr().err


def test_console_script_runs(tmp_path):
    cfg = _write_config(tmp_path)
    proc = subprocess.run([sys.executable, "-m", "optoring.cli", "steady",
                           "--config", cfg], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["N"] > 0


def test_help_exits_zero():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
