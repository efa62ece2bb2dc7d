import json
from pathlib import Path

import numpy as np
import pytest

from rislink.cli import main
from rislink.config import (dbm_to_watts, db_to_linear, linear_to_db,
                            load_config, watts_to_dbm)
from rislink.errors import ConfigError
from rislink.experiments import SweepResult
from rislink.output import emit_csv, emit_plot_script


def test_unit_round_trips():
    for dbm in (-90.0, 0.0, 13.5, 30.0):
        assert watts_to_dbm(dbm_to_watts(dbm)) == pytest.approx(dbm,
                                                                abs=1e-12)
    for db in (-3.0, 0.0, 9.03, 21.0):
        assert linear_to_db(db_to_linear(db)) == pytest.approx(db, abs=1e-12)
    assert dbm_to_watts(0.0) == pytest.approx(1e-3, rel=1e-15)
    assert watts_to_dbm(0.0) == -np.inf
    with pytest.raises(ConfigError):
        linear_to_db(-1.0)


def test_default_config_loads_and_validates():
    cfg = load_config()
    assert cfg.wavelength == pytest.approx(0.0286)
    assert cfg.tx_power == pytest.approx(1e-3)
    assert cfg.tx_gain == pytest.approx(10**2.1)
    assert cfg.ris_gain == pytest.approx(10**0.903)
    assert (cfg.ris_rows, cfg.ris_cols) == (20, 20)
    assert cfg.antennas == 16
    assert cfg.spacing == pytest.approx(0.0143)
    assert not cfg.direct_link
    assert len(cfg.config_hash) == 64


def test_config_overrides():
    cfg = load_config(paper_scale=True, direct_link=True,
                      strict_far_field=True, grid_override=7)
    assert (cfg.ris_rows, cfg.ris_cols) == (100, 100)
    assert cfg.direct_link
    assert cfg.far_field_mode == "strict"
    assert cfg.sweeps.plane_points == 7
    assert cfg.sweeps.robustness_points == 7


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("radio: [not, a, mapping\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    incomplete = tmp_path / "incomplete.yaml"
    incomplete.write_text("radio:\n  tx_power_dbm: 0.0\n")
    with pytest.raises(ConfigError):
        load_config(incomplete)
    from rislink.config import default_config_text
    negative = tmp_path / "negative.yaml"
    negative.write_text(default_config_text().replace(
        "wavelength_m: 0.0286", "wavelength_m: -1.0"))
    with pytest.raises(ConfigError):
        load_config(negative)
    with pytest.raises(ConfigError):
        load_config(grid_override=1)


def test_emit_csv_format_and_sidecar(tmp_path):
    result = SweepResult(kind="line", header=("a", "b"),
                         rows=[(1.0, 0.123456789123), (2.0, -np.inf)],
                         meta={"experiment": "demo", "config_hash": "x" * 64,
                               "tool": "rislink", "version": "1.0.0"})
    path = emit_csv(result, tmp_path / "demo.csv")
    text = path.read_text()
    lines = text.strip().split("\n")
    assert lines[0] == "a,b"
    assert lines[1] == "1,0.123456789"
    assert lines[2] == "2,-inf"
    meta = json.loads((tmp_path / "demo.csv.meta.json").read_text())
    assert meta["rows"] == 2
    assert meta["config_hash"] == "x" * 64
    assert "timestamp" not in meta


def test_emit_csv_empty_and_mismatched(tmp_path):
    empty = SweepResult(kind="line", header=("a",))
    path = emit_csv(empty, tmp_path / "empty.csv")
    assert path.read_text() == "a\n"
    bad = SweepResult(kind="line", header=("a",), rows=[(1.0, 2.0)])
    with pytest.raises(ValueError):
        emit_csv(bad, tmp_path / "bad.csv")


def test_emit_plot_scripts(tmp_path):
    line = SweepResult(kind="line", header=("d_m", "p_w", "p_dbm"),
                       rows=[(1.0, 2.0, 3.0)])
    gp = emit_plot_script(line, tmp_path / "line.csv", tmp_path / "line.gp")
    text = gp.read_text()
    assert "set logscale y" in text
    assert "using 1:2" in text
    heat = SweepResult(kind="heatmap", header=("x_m", "y_m", "ris_dbm"))
    text = emit_plot_script(heat, tmp_path / "h.csv",
                            tmp_path / "h.gp").read_text()
    assert "set view map" in text
    rob = SweepResult(kind="robustness",
                      header=("x_m", "y_m", "deviation", "e", "i"))
    text = emit_plot_script(rob, tmp_path / "r.csv",
                            tmp_path / "r.gp").read_text()
    assert "levels discrete 0.1" in text
    with pytest.raises(ValueError):
        emit_plot_script(SweepResult(kind="mystery", header=("a",)),
                         tmp_path / "m.csv", tmp_path / "m.gp")


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["solve", "--out", str(tmp_path / "a")]) == 0
    assert (tmp_path / "a" / "solve.csv").is_file()
    assert (tmp_path / "a" / "solve.csv.meta.json").is_file()
    assert (tmp_path / "a" / "solve.gp").is_file()
    missing = str(tmp_path / "nope.yaml")
    assert main(["solve", "--config", missing]) == 1
    err = capsys.readouterr().err
    assert "error:" in err


def test_cli_validate_passes(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_cli_solve_rows(tmp_path):
    main(["solve", "--out", str(tmp_path), "--direct-link"])
    lines = (tmp_path / "solve.csv").read_text().strip().split("\n")
    methods = [ln.split(",")[0] for ln in lines[1:]]
    assert methods == ["closed-form", "closed-form-two-path", "svd-projected",
                       "upper-bound"]


@pytest.mark.parametrize("command", ["solve", "sweep-distance", "sweep-plane",
                                     "sweep-wavelength", "robustness"])
def test_cli_reruns_are_byte_identical(command, tmp_path):
    args = [command, "--grid", "4"]
    assert main(args + ["--out", str(tmp_path / "one")]) == 0
    assert main(args + ["--out", str(tmp_path / "two")]) == 0
    name = command.replace("-", "_") + ".csv"
    a = (tmp_path / "one" / name).read_bytes()
    b = (tmp_path / "two" / name).read_bytes()
    assert a == b
    ma = (tmp_path / "one" / (name + ".meta.json")).read_bytes()
    mb = (tmp_path / "two" / (name + ".meta.json")).read_bytes()
    assert ma == mb


def test_cli_plane_sweep_row_count(tmp_path):
    assert main(["sweep-plane", "--grid", "5",
                 "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "sweep_plane.csv").read_text().strip().split("\n")
    assert len(lines) == 1 + 25


def test_sweep_rows_respect_power_ordering(tmp_path):
    assert main(["sweep-distance", "--grid", "6",
                 "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "sweep_distance.csv").read_text().strip().split("\n")
    header = lines[0].split(",")
    ic, isv, ib = (header.index(c) for c in ("closed_form_w", "svd_w",
                                             "upper_bound_w"))
    for ln in lines[1:]:
        vals = ln.split(",")
        closed, svd, bound = (float(vals[i]) for i in (ic, isv, ib))
        assert closed <= svd * (1 + 1e-9)
        assert svd <= bound * (1 + 1e-9)
