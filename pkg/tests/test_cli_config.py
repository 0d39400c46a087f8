import csv
import io
import math

import numpy as np
import pytest

from avgrecon.cli import main
from avgrecon.config import (
    load_experiment_config,
    load_measure,
    parse_grid,
    parse_int_list,
    parse_real,
    read_sections,
)
from avgrecon.errors import ConfigError
from avgrecon.experiments import run_experiment
from avgrecon.measures import validate_measure
from avgrecon.oracles import empirical_c_h

PI = math.pi

EXP2_FILE = """\
# experiment 2 written out by hand
[measure]
atom = [-1/4, 1/8]
atom = [0, 3/4]
atom = [1/4, 1/8]
sigma = 1/2

[signal]
target = "sinc"

[run]
delta = pi/2
n = 2..6
"""


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_real_forms():
    assert parse_real("1/12") == pytest.approx(1 / 12)
    assert parse_real("2pi/3") == pytest.approx(2 * PI / 3)
    assert parse_real("pi/4") == pytest.approx(PI / 4)
    assert parse_real("0.5*pi") == pytest.approx(PI / 2)
    assert parse_real("-pi") == pytest.approx(-PI)
    assert parse_real("1e-12") == 1e-12
    with pytest.raises(ConfigError):
        parse_real("banana")


def test_lists_and_grids():
    assert parse_int_list("2..5, 8") == [2, 3, 4, 5, 8]
    assert np.allclose(parse_grid("default"), np.arange(1, 10) / 10)
    assert np.allclose(parse_grid("0:1:3"), [0.25, 0.5, 0.75])
    assert np.allclose(parse_grid("0.2, 0.7"), [0.2, 0.7])
    with pytest.raises(ConfigError):
        parse_int_list("1, x")


def test_config_file_roundtrip(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text(EXP2_FILE)
    assert read_sections(path)["measure"]["atom"][0] == "[-1/4, 1/8]"
    cfg = load_experiment_config(path)
    assert cfg.ns == [2, 3, 4, 5, 6]
    assert cfg.measure == load_measure("experiment2")
    report = run_experiment(cfg)
    assert len(report.rows) == 5


def test_bad_configs(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("[measure]\natom = [0.1, 1]\n")
    with pytest.raises(ConfigError):
        validate_measure(load_measure(str(path)), PI / 2)
    path.write_text("[measure]\npreset = nope\n")
    with pytest.raises(ConfigError):
        load_measure(str(path))
    with pytest.raises(ConfigError):
        load_measure(str(tmp_path / "missing.cfg"))


def test_cli_validate(tmp_path, capsys):
    assert main(["validate"]) == 0
    rows = {r["quantity"]: float(r["value"]) for r in _rows(capsys.readouterr().out)}
    assert rows["beta_e"] == pytest.approx(9.330250, abs=1e-6)


def test_cli_validate_errors(tmp_path, capsys):
    bad = tmp_path / "asym.cfg"
    bad.write_text("[measure]\natom = [0.1, 1]\n")
    assert main(["validate", "--measure", str(bad)]) == 2
    assert main(["validate", "--delta", "4"]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_plan_and_kernel(tmp_path, capsys):
    assert main(["plan", "dump", "--k", "3"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert sum(r["quantity"] == "c" for r in rows) == 3
    assert main(["kernel", "emit", "--k", "2", "--points", "11"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 11 and float(rows[5]["x"]) == 0.0
    out = tmp_path / "spec.csv"
    assert main(["kernel", "spectrum", "--n", "12", "--points", "21", "--output", str(out)]) == 0
    rows = _rows(out.read_text())
    assert float(rows[0]["phi_hat"]) == 0.0 and float(rows[10]["phi_hat"]) == pytest.approx(1.0)


def test_cli_reconstruct_and_sweep(capsys):
    assert main(["reconstruct", "--n", "12", "--x-grid", "0.25,0.75"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 2 and all(float(r["error"]) < 1e-3 for r in rows)
    assert main(["sweep", "--n-list", "4,8", "--no-timing"]) == 0
    first = capsys.readouterr().out
    assert main(["sweep", "--n-list", "4,8", "--no-timing", "--workers", "2"]) == 0
    assert capsys.readouterr().out == first
    assert main(["reconstruct", "--n", "4", "--x-grid", "1.5"]) == 2


def test_cli_verify(capsys):
    assert main(["verify", "--deltas", "pi/2", "--k-max", "2"]) == 0
    captured = capsys.readouterr()
    assert "checks passed" in captured.err
    assert all(r["status"] == "pass" for r in _rows(captured.out))


def test_cli_verify_failure_exit(monkeypatch, capsys):
    from avgrecon import cli, oracles

    def broken(contexts, k_values, seed=0):
        return [oracles.OracleReport("broken", False, 1.0, 0.0)]

    monkeypatch.setattr(cli, "run_all", broken)
    assert main(["verify", "--deltas", "pi/2"]) == 3
    assert "FAIL broken" in capsys.readouterr().err


def test_experiment_csv_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["experiment2", "--output", str(a)]) == 0
    assert main(["experiment2", "--output", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "best match" in capsys.readouterr().err


def test_experiment1_shape(tmp_path):
    out = tmp_path / "e1.csv"
    assert main(["experiment1", "--output", str(out), "--c-h", str(empirical_c_h())]) == 0
    rows = _rows(out.read_text())
    by_delta = {}
    for r in rows:
        by_delta.setdefault(r["delta"], []).append(r)
    assert len(by_delta) == 3
    for group in by_delta.values():
        errs = [float(r["error"]) for r in group]
        bounds = [float(r["bound"]) for r in group]
        # errors oscillate with the sample phase; only the trend is monotone
        assert errs[-1] < errs[0] / 10
        assert all(a > b for a, b in zip(bounds, bounds[1:]))
        assert all(e <= bd for e, bd in zip(errs, bounds))


def test_experiment_config_flag(tmp_path):
    cfg = tmp_path / "e.cfg"
    cfg.write_text(EXP2_FILE + "output = " + str(tmp_path / "from_cfg.csv") + "\n")
    assert main(["experiment2", "--config", str(cfg)]) == 0
    assert len(_rows((tmp_path / "from_cfg.csv").read_text())) == 5
