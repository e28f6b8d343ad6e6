#!/usr/bin/env python3
"""
测试命令行入口：退出码、输出格式与确定性
"""

import json

import pytest

from api import RunConfig, create_runner, emit
from config.settings import Settings
from fixedpoint.errors import DimensionError, DomainError
from fixedpoint.rearrange import ball_volume
from main import main


def run_cli(capsys, *argv):
    with pytest.raises(SystemExit) as info:
        main(list(argv))
    captured = capsys.readouterr()
    return info.value.code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run_cli(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_decide_exit_codes(capsys):
    code, data = run_json(capsys, "decide", "--n", "3", "--space", "lorentz:p=10")
    assert code == 0
    assert data["decision"]["verdict"] == "FixedPointExists"
    code, data = run_json(capsys, "decide", "--n", "2", "--space", "lorentz:p=10")
    assert code == 1
    assert data["decision"]["method"] == "DimensionRule"


def test_invalid_descriptor_names_field(capsys):
    code, data = run_json(capsys, "decide", "--n", "3", "--space", "lorentz:p=1,q=2")
    assert code == 2
    assert data["error"]["code"] == "DESCRIPTOR_INVALID"
    assert data["error"]["field"] == "q"


def test_invalid_dimension_is_rejected(capsys):
    code, data = run_json(capsys, "decide", "--n", "0", "--space", "lorentz:p=10")
    assert code == 2
    assert data["error"]["code"] == "DIMENSION_INVALID"


def test_rearrange_fixed_point_profile(capsys):
    t = 8.0 * ball_volume(3)
    code, data = run_json(capsys, "rearrange", "--profile", "F:n=3", "--grid", f"1.0,{t!r}")
    assert code == 0
    assert data["columns"] == ["t", "f_star", "f_doublestar", "layer_cake"]
    row = data["rows"][1]
    assert row[1] == pytest.approx(0.5)
    assert row[3] == pytest.approx(0.5, rel=1e-9)
    assert data["rows"][0][1] == 1.0


def test_rearrange_from_json_file(capsys, tmp_path):
    descriptor = {
        "kind": "radial",
        "n": 3,
        "pieces": [
            {"t_lo": 0, "t_hi": 1, "c": 1, "alpha": 0, "beta": 0},
            {"t_lo": 1, "t_hi": "inf", "c": 1, "alpha": -1, "beta": 0},
        ],
    }
    path = tmp_path / "F.json"
    path.write_text(json.dumps(descriptor), encoding="utf-8")
    code, data = run_json(capsys, "rearrange", "--profile", str(path), "--grid", repr(8.0 * ball_volume(3)))
    assert code == 0
    assert data["rows"][0][1] == pytest.approx(0.5)


def test_indices_of_two_power_space(capsys):
    code, data = run_json(capsys, "indices", "--space", "prop:a=0.2,b=0.6")
    assert code == 0
    assert data["beta_lower"] == pytest.approx(0.2)
    assert data["beta_upper"] == pytest.approx(0.6)


def test_norm_of_h_in_weak_space(capsys):
    code, data = run_json(capsys, "norm", "--space", "marcinkiewicz_weak:W,n=3", "--profile", "h:n=3")
    assert code == 0
    assert data["norm"] == pytest.approx(1.0)


def test_verify_errors_exit_two(capsys):
    code, data = run_json(capsys, "verify", "lemma-phi", "--n", "2")
    assert code == 2
    assert data["error"]["code"] == "DIMENSION_INVALID"
    code, data = run_json(capsys, "verify", "bogus", "--n", "3")
    assert code == 2
    assert data["error"]["code"] == "DOMAIN_ERROR"


def test_checks_argument_only_for_verify(capsys):
    code, out, err = run_cli(capsys, "decide", "newton", "--n", "3", "--space", "lorentz:p=10")
    assert code == 2
    assert out == ""
    assert "newton" in err


def test_verify_newton_passes(capsys):
    code, data = run_json(capsys, "verify", "newton", "--n", "3")
    assert code == 0
    assert data["passed"] is True
    assert data["rows"][0][0] == "newton"


def test_output_is_deterministic(capsys):
    argv = ("decide", "--n", "4", "--space", "lambda:p=2,a=0,b=0", "--format", "json")
    first = run_cli(capsys, *argv)[1]
    second = run_cli(capsys, *argv)[1]
    assert first == second


def test_csv_uses_full_precision(capsys):
    code, out, _ = run_cli(capsys, "tail", "--n", "3", "--profile", "indicator:s=1", "--grid", "2",
                           "--format", "csv")
    assert code == 0
    header, row = out.splitlines()
    assert header == "t,tail_T"
    value = row.split(",")[1]
    assert float(value) == pytest.approx(3.0 * 2.0 ** (-1.0 / 3.0), rel=1e-15)


def test_text_format_and_out_file(capsys, tmp_path):
    out_path = tmp_path / "decision.txt"
    code, out, err = run_cli(capsys, "decide", "--n", "3", "--space", "lorentz:p=3,q=inf",
                             "--format", "text", "--out", str(out_path))
    assert code == 0
    assert out == ""
    text = out_path.read_text(encoding="utf-8")
    assert "verdict: FixedPointExists" in text
    assert str(out_path) in err


def test_runner_without_cli():
    runner = create_runner()
    result = runner.run(RunConfig(command="norm", space="lebesgue:p=4", profile="h:n=3"))
    assert result.exit_code == 0
    assert result.payload["norm"] == pytest.approx(2.0 ** 0.5)
    assert json.loads(emit(result, "json"))["command"] == "norm"
    with pytest.raises(DomainError):
        RunConfig(command="plot")
    with pytest.raises(DimensionError):
        RunConfig(command="decide", n=-1)


@pytest.mark.parametrize("n, space, expected", [
    (3, "lorentz:p=10", 0),
    (3, "lorentz:p=3,q=3", 1),
    (3, "lebesgue:p=1", 1),
    (4, "lambda:p=2,a=0,b=0", 1),
    (5, "lambda:p=2,a=0,b=0", 0),
    (3, "minimal:n=3", 0),
    (3, "prop:a=0.2,b=0.5", 1),
    (3, "logstar:n=3,sign=-1", 0),
    (3, "logstar:n=3,sign=1", 1),
    (1, "lorentz:p=10", 1),
    (3, "lorentz:p=inf,q=2", 2),
    (3, "orlicz:p=2", 2),
    (3, '{"kind": "lambda", "p": 2}', 2),
])
def test_decide_exit_code_contract(n, space, expected):
    result = create_runner().run(RunConfig(command="decide", n=n, space=space))
    assert result.exit_code == expected


def test_indices_follow_grid_settings():
    settings = Settings()
    settings.grid.dilation_steps = 8
    settings.grid.dilation_step = 0.5
    result = create_runner(settings).run(RunConfig(command="indices", space="prop:a=0.2,b=0.6", grid="4"))
    assert result.exit_code == 0
    assert result.columns == ["s", "dilation", "source", "t_max"]
    assert result.rows[0][3] == 16.0
    assert result.payload["grid"]["step"] == 0.5
    assert result.payload["beta_upper"] == pytest.approx(0.6)


def test_fixed_shorthand_matches_F(capsys):
    grid = f"1.0,{8.0 * ball_volume(3)!r}"
    fixed = run_json(capsys, "rearrange", "--profile", "fixed:n=3", "--grid", grid)[1]
    explicit = run_json(capsys, "rearrange", "--profile", "F:n=3", "--grid", grid)[1]
    assert fixed["rows"] == explicit["rows"]
