import json

import pytest

from hr_rigidity.__main__ import main, parse_arguments
from hr_rigidity.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, config_from_arguments, run
from hr_rigidity.config import RunConfig

@pytest.fixture
def log_args(tmp_path):
    return ["--log-file", str(tmp_path / "logs" / "hr.log"), "--no-console-log"]

def run_main(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    return info.value.code

def test_parse_run_arguments():
    args = parse_arguments(["run", "--suite", "walter", "--params", "eps=0.1", "--grid", "8,8", "--c", "-1"])
    assert args.command == "run"
    assert args.suite == "walter"
    assert args.c == -1.0
    assert args.samples is None

def test_arguments_override_file(tmp_path):
    path = tmp_path / "corrida.json"
    path.write_text(json.dumps({"suite": "cones", "seed": 2, "tolerances": {"walter": 1e-6}}), encoding="utf-8")
    args = parse_arguments(["run", "--config", str(path), "--seed", "9", "--tol", "gradient=1e-7", "--grid", "8"])
    config = config_from_arguments(args)
    assert config.suite == "cones"
    assert config.seed == 9
    assert config.grid == [8]
    assert config.tolerances == {"walter": 1e-6, "gradient": 1e-7}

def test_symfun_run_writes_report(tmp_path, log_args):
    out = tmp_path / "reporte.json"
    code = run_main(log_args + ["run", "--suite", "symfun", "--samples", "70", "--seed", "1", "--out", str(out)])
    assert code == EXIT_OK
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["summary"]["fail"] == 0
    assert data["summary"]["pass"] == len(data["records"])
    assert {record["check_id"] for record in data["records"]} >= {"symfun.generating", "symfun.derivative_chain"}
    assert data["meta"]["seed"] == 1

def test_same_seed_gives_identical_records(tmp_path):
    outputs = []
    for name in ("a.json", "b.json"):
        config = RunConfig(suite="symfun", samples=35, seed=4, output=str(tmp_path / name))
        assert run(config, timestamp="fijo") == EXIT_OK
        outputs.append(json.loads((tmp_path / name).read_text(encoding="utf-8"))["records"])
    assert json.dumps(outputs[0]) == json.dumps(outputs[1])

def test_tight_tolerance_gives_failures(tmp_path, log_args):
    out = tmp_path / "reporte.json"
    code = run_main(log_args + [
        "run", "--suite", "walter", "--family", "bump", "--grid", "8", "--tol", "walter=1e-300,gauss=1e-300",
        "--out", str(out),
    ])
    assert code == EXIT_FAIL
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["summary"]["fail"] > 0
    assert data["meta"]["tolerance_overrides"] == {"walter": 1e-300, "gauss": 1e-300}

def test_invalid_configuration_exits_with_two(tmp_path, log_args):
    out = tmp_path / "reporte.json"
    assert run_main(log_args + ["run", "--family", "wente", "--out", str(out)]) == EXIT_CONFIG
    assert run_main(log_args + ["run", "--grid", "-4", "--out", str(out)]) == EXIT_CONFIG
    assert run_main(log_args + ["run", "--tol", "waltr=1e-6", "--out", str(out)]) == EXIT_CONFIG
    assert not out.exists()

def test_unwritable_report_exits_with_two(tmp_path, log_args):
    blocker = tmp_path / "archivo"
    blocker.write_text("x")
    code = run_main(log_args + ["run", "--suite", "symfun", "--samples", "7", "--out", str(blocker / "r.json")])
    assert code == EXIT_CONFIG

def test_validate_subcommand(tmp_path, log_args):
    good = tmp_path / "buena.json"
    good.write_text(json.dumps({"suite": "rigidity", "family": "bump", "c": -1}), encoding="utf-8")
    bad = tmp_path / "mala.json"
    bad.write_text('{"suite": "rigidity", "grid": [-4]}', encoding="utf-8")
    assert run_main(log_args + ["validate", "--config", str(good)]) == EXIT_OK
    assert run_main(log_args + ["validate", "--config", str(bad)]) == EXIT_CONFIG
    assert run_main(log_args + ["validate", "--config", str(tmp_path / "falta.json")]) == EXIT_CONFIG

def test_subcommand_is_required():
    with pytest.raises(SystemExit):
        parse_arguments([])
