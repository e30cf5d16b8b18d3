"""Sweep driver, CSV determinism, plots and the command line front end."""

from pathlib import Path

import numpy as np
import pytest

from dressedsps.cli import main
from dressedsps.exceptions import ConfigError, RecipeError
from dressedsps.plots import emit_plots, read_sweep_csv
from dressedsps.sweep import (RESULT_FIELDS, SweepSpec, build_spec,
                              evaluate_point, find_optimal_detuning,
                              parse_config, phonon_table_rows, run_sweep)

G = 1.32


def write_config(path, **kw):
    lines = [f"{key} = {val}" for key, val in kw.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_parse_config_roundtrip(tmp_path):
    cfg = write_config(tmp_path / "s.cfg", mode="at-drive", start=2, stop=20,
                       points=3, scale="log", phonons="none")
    values = parse_config(cfg)
    spec = build_spec(values)
    assert spec.mode == "at-drive" and spec.points == 3
    assert spec.phonons is None
    assert spec.gamma_B == pytest.approx(2 * spec.gamma_X)


def test_parse_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("mode at-drive\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="bad.cfg:1"):
        parse_config(bad)
    bad.write_text("modee = at-drive\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="unknown field"):
        parse_config(bad)
    bad.write_text("points = few\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="integer"):
        parse_config(bad)


def test_build_spec_validation():
    with pytest.raises(ConfigError):
        build_spec({})
    with pytest.raises(ConfigError):
        build_spec({"mode": "unknown-mode"})
    with pytest.raises(ConfigError):
        build_spec({"mode": "at-drive", "points": 1})
    with pytest.raises(ConfigError):
        build_spec({"mode": "stark-detuning", "points": 3})
    with pytest.raises(ConfigError):
        build_spec({"mode": "at-drive", "points": 3, "scale": "log",
                    "start": -1.0, "stop": 2.0})


def at_drive_spec(tmp_path, **kw):
    base = dict(mode="at-drive", start=5.0, stop=20.0, points=3, scale="log",
                out=str(tmp_path / "sweep.csv"))
    base.update(kw)
    return SweepSpec(**base)


def test_run_sweep_csv_layout(tmp_path):
    spec = at_drive_spec(tmp_path)
    result = run_sweep(spec)
    assert result.exit_code == 0
    text = result.path.read_text(encoding="utf-8")
    lines = text.splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    assert any("rtol = 1e-08" in ln for ln in meta)
    assert any("gamma_X_ueV = 1.32" in ln for ln in meta)
    header = next(ln for ln in lines if not ln.startswith("#"))
    assert header == ",".join(RESULT_FIELDS)
    data = read_sweep_csv(result.path)
    assert len(data["swept_value"]) == 3
    # missing quantities are empty, parsed back as NaN, never zeros
    assert np.all(np.isnan(data["g2_0"]))
    assert np.all(np.isnan(data["E_cw"]))
    assert np.all(np.isfinite(data["I"]))


def test_run_sweep_byte_determinism(tmp_path):
    spec1 = at_drive_spec(tmp_path, out=str(tmp_path / "a.csv"))
    spec2 = at_drive_spec(tmp_path, out=str(tmp_path / "b.csv"))
    run_sweep(spec1)
    run_sweep(spec2)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_run_sweep_parallel_matches_serial(tmp_path):
    serial = at_drive_spec(tmp_path, out=str(tmp_path / "serial.csv"))
    parallel = at_drive_spec(tmp_path, out=str(tmp_path / "par.csv"), jobs=2)
    run_sweep(serial)
    run_sweep(parallel)
    a = (tmp_path / "serial.csv").read_text().splitlines()
    b = (tmp_path / "par.csv").read_text().splitlines()
    # identical apart from the recorded jobs default
    diff = [(x, y) for x, y in zip(a, b) if x != y]
    assert diff == [("# jobs = 1", "# jobs = 2")]


def test_run_sweep_partial_failure(tmp_path):
    # a linear detuning sweep crossing zero has one invalid point at x = 0
    spec = SweepSpec(mode="stark-detuning", start=-10.0, stop=10.0, points=3,
                     scale="linear", delta_ac=5 * G, out=str(tmp_path / "f.csv"))
    result = run_sweep(spec)
    assert result.exit_code == 3
    assert len(result.failures) == 1 and "x = 0" in result.failures[0]
    data = read_sweep_csv(result.path)
    assert len(data["swept_value"]) == 2


def test_stark_sweep_monotone_without_phonons(tmp_path):
    spec = SweepSpec(mode="stark-detuning", start=5.0, stop=50.0, points=4,
                     scale="log", delta_ac=5 * G, out=str(tmp_path / "m.csv"))
    result = run_sweep(spec)
    vals = [row["I"] for row in result.rows]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_pulse_sweep_row_contents(tmp_path):
    spec = SweepSpec(mode="pulse-g2", start=0.5, stop=1.0, points=2,
                     scale="linear", omega_cw=20 * G, out=str(tmp_path / "p.csv"))
    result = run_sweep(spec)
    assert result.exit_code == 0
    for row in result.rows:
        assert row["g2_0"] is not None and row["N"] is not None
        assert row["I"] is None and row["E_cw"] is None
    # longer pulses leak more two-photon amplitude
    assert result.rows[1]["g2_0"] > result.rows[0]["g2_0"]


def test_phonon_table_mode(tmp_path):
    rows = phonon_table_rows()
    table = {r["preset"]: r for r in rows}
    assert table["I"]["eta_eff_pct"] == pytest.approx(90.1, abs=0.3)
    assert table["I"]["eta_eff_cav_pct"] == pytest.approx(90.0, abs=0.3)
    assert table["II"]["eta_eff_pct"] == pytest.approx(65.4, abs=0.3)
    assert table["II"]["eta_eff_cav_pct"] == pytest.approx(86.7, abs=0.3)
    assert table["III"]["eta_eff_pct"] == pytest.approx(68.2, abs=0.3)
    assert table["III"]["eta_eff_cav_pct"] == pytest.approx(87.2, abs=0.3)
    spec = SweepSpec(mode="phonon-table", out=str(tmp_path / "t.csv"))
    result = run_sweep(spec)
    assert result.path.exists()
    assert "preset," in result.path.read_text().splitlines()[2]


def test_evaluate_point_fills_visibilities():
    spec = SweepSpec(mode="at-drive", start=5.0, stop=20.0, points=2,
                     scale="log", R=0.6, epsilon=0.1)
    row = evaluate_point(spec, 20.0)
    assert row["V_raw"] == pytest.approx(row["I"] / spec.interferometer().chi_cor,
                                         rel=1e-12)
    assert row["V"] == pytest.approx(row["I"], rel=1e-12)


def test_find_optimal_detuning_boundary_without_phonons():
    res = find_optimal_detuning(10 * G, None, lo=3.0, hi=30.0, coarse_points=6)
    assert not res.interior
    assert res.ratio_opt == pytest.approx(30.0)


def test_emit_plots(tmp_path):
    spec = at_drive_spec(tmp_path)
    result = run_sweep(spec)
    paths = emit_plots(result.path, "fig3a")
    assert paths[0].exists() and paths[0].suffix == ".png"
    paths = emit_plots(result.path, "xy:N,I", out_dir=tmp_path / "figs")
    assert paths[0].exists()
    with pytest.raises(RecipeError, match="unknown recipe"):
        emit_plots(result.path, "fig99")
    with pytest.raises(RecipeError, match="not present"):
        emit_plots(result.path, "xy:bogus")


def test_emit_plots_refuses_empty_csv(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# comment only\n" + ",".join(RESULT_FIELDS) + "\n",
                     encoding="utf-8")
    with pytest.raises(RecipeError, match="no data rows"):
        emit_plots(empty, "fig3a")
    assert not list(tmp_path.glob("*.png"))


def test_cli_run_and_exit_codes(tmp_path, capsys):
    cfg = write_config(tmp_path / "run.cfg", mode="at-drive", start=5, stop=20,
                       points=2, scale="log", out=str(tmp_path / "cli.csv"))
    assert main(["run", str(cfg), "--plot", "fig3a"]) == 0
    assert (tmp_path / "cli.csv").exists()
    assert (tmp_path / "cli_fig3a.png").exists()
    out = capsys.readouterr().out
    assert "wrote" in out


def test_cli_config_error_exit_code(tmp_path, capsys):
    bad = write_config(tmp_path / "bad.cfg", mode="no-such-mode")
    assert main(["run", str(bad)]) == 1
    assert "config error" in capsys.readouterr().err


def test_cli_partial_failure_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path / "pf.cfg", mode="stark-detuning", start=-10,
                       stop=10, points=3, scale="linear", delta_ac=5 * G,
                       out=str(tmp_path / "pf.csv"))
    assert main(["run", str(cfg)]) == 3
    assert "point failed" in capsys.readouterr().err


def test_cli_table(capsys):
    assert main(["table-i"]) == 0
    out = capsys.readouterr().out
    assert "90.1" in out and "86.7" in out


def test_cli_optimum_boundary(capsys):
    assert main(["optimum", "--delta-ac", str(10 * G), "--phonons", "none",
                 "--lo", "3", "--hi", "30"]) == 0
    out = capsys.readouterr().out
    assert "boundary" in out


def test_cli_plot_errors(tmp_path, capsys):
    missing = tmp_path / "nothing.csv"
    assert main(["plot", str(missing), "--recipe", "fig3a"]) == 1
