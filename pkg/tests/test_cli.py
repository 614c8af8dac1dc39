import io
import json
import os

import pytest

from orlicz_hy import cli


def run(argv, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path))
    out = io.StringIO()
    code = cli.main(argv, out)
    return code, out.getvalue()


def test_list_contents(tmp_path, monkeypatch):
    code, text = run(["list"], tmp_path, monkeypatch)
    assert code == 0
    for name in ("sphere2", "su2", "torus:1", "riordan:1.5"):
        assert f"  {name}\n" in text
    spaces = text.split("young functions:")[0].split()[1:]
    assert spaces == sorted(spaces)


def test_unknown_flag_is_usage_error(tmp_path, monkeypatch, capsys):
    code, _ = run(["list", "--bogus"], tmp_path, monkeypatch)
    assert code == cli.EXIT_USAGE
    code, _ = run(["verify", "nothing"], tmp_path, monkeypatch)
    assert code == cli.EXIT_USAGE
    code, _ = run(["verify", "hy-lp", "--space", "klein"], tmp_path, monkeypatch)
    assert code == cli.EXIT_USAGE


def test_verify_hy_lp_writes_report(tmp_path, monkeypatch):
    code, text = run(["verify", "hy-lp", "--space", "sphere2", "--p", "1.5", "--L", "8", "-n", "200", "--seed", "7"],
                     tmp_path, monkeypatch)
    assert code == 0
    doc = json.loads((tmp_path / "verify-hy-lp-seed7.json").read_text())
    assert doc["verdict"] == "pass"
    assert doc["n"] == 200 and doc["L"] == 8 and doc["seed"] == 7
    assert len(doc["samples"]) == 200
    assert set(doc["refinement"]) >= {"oversample", "delta"}
    assert set(doc["aggregate"]) >= {"max_margin", "max_ratio"}


def test_verify_hoelder_power_pass(tmp_path, monkeypatch):
    code, _ = run(["verify", "hoelder", "--pair", "power:1.5", "--space", "torus:1"], tmp_path, monkeypatch)
    assert code == 0


def test_verify_hy_orlicz_exp_exit_2(tmp_path, monkeypatch):
    code, text = run(["verify", "hy-orlicz", "--pair", "exp"], tmp_path, monkeypatch)
    assert code == cli.EXIT_HYPOTHESIS
    assert "hypothesis" in text
    assert not list(tmp_path.iterdir())


def test_failing_verdict_exit_1(tmp_path, monkeypatch):
    # the extremal-partner equality does not hold for the Riordan pair
    code, _ = run(["verify", "hoelder", "--pair", "riordan:1.5", "--L", "3", "-n", "3", "--no-refine"],
                  tmp_path, monkeypatch)
    assert code == cli.EXIT_FAIL


def test_io_error_exit_3(tmp_path, monkeypatch):
    code, _ = run(["verify", "parseval", "--L", "2", "-n", "2", "-o", str(tmp_path / "missing" / "r.json")],
                  tmp_path, monkeypatch)
    assert code == cli.EXIT_IO
    assert not (tmp_path / "missing").exists()


def test_no_partial_file_on_failure(tmp_path, monkeypatch):
    target = tmp_path / "r.json"

    def boom(*a, **k):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    code, _ = run(["verify", "parseval", "--L", "2", "-n", "2", "-o", str(target)], tmp_path, monkeypatch)
    assert code == cli.EXIT_IO
    assert list(tmp_path.iterdir()) == []


def test_config_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"L": 3, "n": 4, "seed": 5}))
    out = tmp_path / "out.json"
    code, _ = run(["verify", "hy-lp", "--config", str(cfg), "--seed", "6", "-o", str(out)], tmp_path, monkeypatch)
    assert code == 0
    doc = json.loads(out.read_text())
    assert (doc["L"], doc["n"], doc["seed"]) == (3, 4, 6)


def test_bad_config(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"L": 3, "nested": {"a": 1}}))
    code, _ = run(["verify", "hy-lp", "--config", str(cfg)], tmp_path, monkeypatch)
    assert code == cli.EXIT_USAGE
    code, _ = run(["verify", "hy-lp", "-n", "0"], tmp_path, monkeypatch)
    assert code == cli.EXIT_USAGE


def test_csv_output(tmp_path, monkeypatch):
    code, text = run(["verify", "parseval", "--space", "su2", "--L", "2", "-n", "3", "--format", "csv", "-o", "-"],
                     tmp_path, monkeypatch)
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "index,lhs,rhs,margin"
    assert len(lines) == 4


def test_float_serialisation_round_trips():
    for x in (0.1, 1 / 3, 2.0**-1074, 1e300, -7.25):
        assert float(json.loads(cli.to_json_text(x))) == x
    assert cli.to_json_text(float("inf")) == '"inf"'
    assert cli.to_json_text(float("nan")) == '"nan"'


@pytest.mark.parametrize("spec,ratio", [("power:1.5", None), ("phi0", 1.0)])
def test_ratio_command(tmp_path, monkeypatch, spec, ratio):
    code, _ = run(["ratio", "--space", "torus:1", "--pair", spec, "--lambda", "first:4", "--restarts", "3"],
                  tmp_path, monkeypatch)
    assert code == 0
    doc = json.loads((tmp_path / "ratio-seed0.json").read_text())
    assert doc["best_ratio"] <= 1 + 1e-8
    if ratio is not None:
        assert doc["best_ratio"] == pytest.approx(ratio, abs=1e-9)


def test_fit_growth(tmp_path, monkeypatch):
    code, _ = run(["fit-growth", "--pair", "riordan:1.5"], tmp_path, monkeypatch)
    assert code == 0
    doc = json.loads((tmp_path / "fit-growth-seed0.json").read_text())
    assert doc["fit"] and doc["p"] >= 1
    code, _ = run(["fit-growth", "--young", "exp"], tmp_path, monkeypatch)
    assert code == cli.EXIT_FAIL
    code, _ = run(["fit-growth"], tmp_path, monkeypatch)
    assert code == 0  # falls back to the default pair
