from __future__ import annotations

import json
import math
import subprocess
import sys

import pytest

from xxrect.cli import main
from xxrect.errors import ConfigError, OutputError
from xxrect.sweep import (
    CSV_HEADER,
    INVALID_POINT,
    emit_csv,
    format_csv,
    grid_points,
    parse_config,
    run_sweep,
)
from xxrect.transport import R_UNDEFINED


def config(**over):
    raw = {
        "schema_version": 1,
        "chain": {"template": "field-junction", "params": {"N": 6, "alpha": 1.0}},
        "baths": {"T_R": 1.0, "dT": 2.0},
        "sweep": [{"param": "h1", "min": -1, "max": 1, "steps": 3},
                  {"param": "h2", "min": -1, "max": 1, "steps": 3}],
    }
    raw.update(over)
    return raw


def test_parse_and_grid():
    cfg = parse_config(json.dumps(config()))
    assert grid_points(cfg)[:4] == [(-1.0, -1.0), (-1.0, 0.0), (-1.0, 1.0), (0.0, -1.0)]
    assert cfg.bath_pair().T_L == 3.0


@pytest.mark.parametrize("mutate, field", [
    (lambda c: c["sweep"][0].update(steps=0), "sweep[0].steps"),
    (lambda c: c["sweep"][0].update(param="beta"), "sweep[0].param"),
    (lambda c: c["chain"]["params"].update(beta=1), "chain.params.beta"),
    (lambda c: c.update(schema_version=2), "schema_version"),
    (lambda c: c["chain"].update(template="ring"), "chain.template"),
    (lambda c: c.update(baths={"T_L": 1.0}), "baths"),
    (lambda c: c.update(baths={"T_L": -1.0, "T_R": 1.0}), "baths.T_L"),
    (lambda c: c.update(sweep=c["sweep"][:1]), "sweep"),
    (lambda c: c["chain"]["params"].pop("alpha"), "chain.params.alpha"),
    (lambda c: c["chain"]["params"].update(N=6.5), "chain.params.N"),
    (lambda c: c.update(extra=1), "config.extra"),
])
def test_config_errors_name_the_field(mutate, field):
    raw = config()
    mutate(raw)
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps(raw))
    assert info.value.field == field


def test_malformed_json_reports_position():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config('{\n  "schema_version": 1,,\n}')


def test_temperature_strings_and_tied_axes():
    raw = config(baths={"T_L": "inf", "T_R": "zero"})
    raw["chain"] = {"template": "graded", "params": {"N": 6, "h_base": 1.0, "alpha_base": 1.0}}
    raw["sweep"] = [{"param": ["h_slope", "alpha_slope"], "min": 0.0, "max": 0.1, "steps": 2},
                    {"param": "gamma", "min": 1.0, "max": 2.0, "steps": 2}]
    rows = run_sweep(parse_config(json.dumps(raw)))
    assert len(rows) == 4 and all(math.isfinite(r.J_fwd) for r in rows)


def test_sweep_rows_and_csv():
    rows = run_sweep(parse_config(json.dumps(config())))
    text = format_csv(rows)
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER == "param1,param2,J_fwd,J_rev,R,flags"
    assert len(lines) == 10 and text.endswith("\n") and "\r" not in text
    diag = [r for r in rows if r.values[0] == r.values[1]]
    assert all(abs(r.R) < 1e-10 for r in diag)


def test_threads_do_not_change_output():
    cfg = parse_config(json.dumps(config()))
    assert format_csv(run_sweep(cfg, threads=1)) == format_csv(run_sweep(cfg, threads=3))


def test_undefined_and_invalid_points():
    raw = config(baths={"T_R": 1.0, "dT": 0.0})
    raw["chain"]["params"]["h2"] = 0.5
    raw["sweep"][1] = {"param": "dT", "min": -2.0, "max": 0.0, "steps": 2}
    rows = run_sweep(parse_config(json.dumps(raw)))
    flags = {r.values: r.flags for r in rows}
    assert flags[(-1.0, -2.0)] == (INVALID_POINT,)
    zero = [r for r in rows if r.values[1] == 0.0][0]
    assert math.isnan(zero.R) and R_UNDEFINED in zero.flags
    assert ",nan," in format_csv(rows)


def test_emit_csv(tmp_path):
    with pytest.raises(ValueError):
        emit_csv([], tmp_path / "x.csv")
    with pytest.raises(OutputError):
        rows = run_sweep(parse_config(json.dumps(config())))
        emit_csv(rows, tmp_path / "missing" / "x.csv")


def test_cli_rectify(capsys):
    code = main(["rectify", "--chain", "boundary-perturbed", "-p", "N=10", "-p", "h=5", "-p", "alpha=1",
                 "--T-L", "inf", "--T-R", "zero"])
    assert code == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "J_fwd,J_rev,R,flags"
    J_fwd, J_rev, R, _ = out[1].split(",")
    assert float(J_fwd) == pytest.approx(3.0, abs=1e-12)
    assert float(J_rev) == pytest.approx(-2.0, abs=1e-12)
    assert float(R) == pytest.approx(0.5, abs=1e-12)


def test_cli_spectrum_steady_current(capsys):
    base = ["--chain", "field-junction", "-p", "N=4", "-p", "h1=1", "-p", "h2=2", "-p", "alpha=1"]
    assert main(["spectrum"] + base) == 0
    assert capsys.readouterr().out.startswith("k,eps,gL,gR\n")
    assert main(["steady"] + base + ["--T-L", "2", "--T-R", "1"]) == 0
    assert capsys.readouterr().out.count("\n") == 5
    assert main(["current"] + base + ["--T-L", "2", "--T-R", "1"]) == 0
    assert capsys.readouterr().out.startswith("J_N,J_E\n")


def test_cli_sweep_to_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config(output=str(tmp_path / "out.csv"))))
    assert main(["sweep", "--config", str(path)]) == 0
    assert (tmp_path / "out.csv").read_text().count("\n") == 10


@pytest.mark.parametrize("argv, code", [
    (["rectify", "--chain", "field-junction", "-p", "N=5", "-p", "h1=1", "-p", "h2=1", "-p", "alpha=1",
      "--T-L", "1", "--T-R", "2"], 2),
    (["rectify", "--chain", "boundary-perturbed", "-p", "N=4"], 2),
    (["sweep"], 2),
    (["sweep", "--config", "/nonexistent/cfg.json"], 4),
])
def test_cli_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert "xxrect:" in capsys.readouterr().err


def test_cli_verify_quick(capsys):
    assert main(["verify", "--quick"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "xxrect", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "xxrect" in out.stdout


def test_shipped_configs_parse():
    from pathlib import Path

    from xxrect.sweep import load_config

    paths = sorted((Path(__file__).parents[1] / "configs").glob("*.json"))
    assert len(paths) == 7
    for p in paths:
        cfg = load_config(str(p))
        assert len(cfg.axes) == 2 and cfg.output.endswith(".csv")


def test_single_row_csv():
    from xxrect.sweep import SweepRow

    text = format_csv([SweepRow((1.0, 2.0), 3.0, -2.0, 0.5, ())])
    assert text == "param1,param2,J_fwd,J_rev,R,flags\n1,2,3,-2,0.5,\n"


def test_rectification_identity_on_every_row():
    raw = config()
    raw["chain"] = {"template": "graded", "params": {"N": 10, "h_base": 0.0, "alpha_base": 0.0}}
    raw["sweep"] = [{"param": ["h_slope", "alpha_slope"], "min": 0.05, "max": 2.0, "steps": 20},
                    {"param": "dT", "min": 5.0, "max": 15.0, "steps": 3}]
    rows = run_sweep(parse_config(json.dumps(raw)))
    assert len(rows) == 60
    for r in rows:
        if math.isfinite(r.R):
            assert r.R * min(r.J_fwd, abs(r.J_rev)) == pytest.approx(r.J_fwd + r.J_rev, abs=1e-9)


def test_rerun_is_byte_identical(tmp_path):
    cfg = parse_config(json.dumps(config()))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_sweep(cfg, output=str(a))
    run_sweep(cfg, threads=2, output=str(b))
    assert a.read_bytes() == b.read_bytes()
