import json

import pytest

from hr_rigidity.config import (
    RunConfig,
    Tolerances,
    load_config,
    merge_overrides,
    tolerance_names,
    validate_config,
)
from hr_rigidity.exceptions import ConfigError

def test_empty_configuration_gives_defaults():
    for raw in (None, "", "  \n", "{}", {}):
        config = validate_config(raw)
        assert config.suite == "all"
        assert config.family == "sphere"
        assert config.grid == [16]
        assert config.samples == 10000
        assert config.output == "hr-rigidity-report.json"
        assert config.dimension == 2

def test_negative_grid_is_rejected_with_key_path():
    with pytest.raises(ConfigError, match="grid"):
        validate_config({"grid": [-4]})

def test_grid_below_minimum():
    with pytest.raises(ConfigError, match="mínimo"):
        validate_config('{"grid": [6]}')

def test_unknown_family_lists_options():
    with pytest.raises(ConfigError) as info:
        validate_config({"family": "wente"})
    message = str(info.value)
    for name in ("bump", "cylinder", "ellipsoid", "sphere", "torus"):
        assert name in message

def test_unknown_suite_suggests_close_name():
    with pytest.raises(ConfigError, match="rigidity"):
        validate_config({"suite": "rigidty"})

def test_unknown_key_is_an_error():
    with pytest.raises(ConfigError, match="tolerance"):
        validate_config({"tolerance": {"walter": 1e-6}})

def test_misspelled_tolerance_is_an_error():
    with pytest.raises(ConfigError, match="walter"):
        validate_config({"tolerances": {"walters": 1e-6}})

@pytest.mark.parametrize("value", [0.0, -1e-6])
def test_tolerance_must_be_positive(value):
    with pytest.raises(ConfigError):
        validate_config({"tolerances": {"walter": value}})

def test_invalid_json_reports_line_and_column():
    with pytest.raises(ConfigError, match="línea 2, columna"):
        validate_config('{\n  "suite": }')

def test_non_object_json():
    with pytest.raises(ConfigError):
        validate_config("[1, 2]")

def test_order_and_dimension_consistency():
    with pytest.raises(ConfigError):
        validate_config({"suite": "walter", "r": 3})
    with pytest.raises(ConfigError):
        validate_config({"suite": "rigidity", "r": 1})
    assert validate_config({"suite": "walter", "r": 1}).r == 1
    assert validate_config({"family": "sphere", "n": 3, "r": 3}).dimension == 3

def test_grid_length_matches_dimension():
    assert validate_config({"grid": [8, 12]}).grid == [8, 12]
    with pytest.raises(ConfigError):
        validate_config({"grid": [8, 8, 8]})

def test_family_parameters_are_checked():
    with pytest.raises(ConfigError):
        validate_config({"family": "ellipsoid", "c": 1.0})
    with pytest.raises(ConfigError):
        validate_config({"family": "bump", "params": {"amplitude": 0.1}})

def test_tolerance_override_reaches_effective_values():
    config = validate_config({"tolerances": {"walter": 1e-6}})
    effective = config.effective_tolerances()
    assert effective.walter == 1e-6
    assert effective.gradient == Tolerances().gradient

def test_tolerances_are_frozen_and_strict():
    tol = Tolerances()
    with pytest.raises(Exception):
        tol.walter = 1.0
    assert "walter" in tolerance_names()
    assert "umbilicity" in tolerance_names()

def test_load_config(tmp_path):
    path = tmp_path / "corrida.json"
    path.write_text(json.dumps({"suite": "symfun", "seed": 3}), encoding="utf-8")
    config = load_config(path)
    assert config.suite == "symfun"
    assert config.seed == 3

def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "falta.json")
    other = tmp_path / "corrida.yaml"
    other.write_text("suite: symfun", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(other)

def test_merge_overrides_ignores_missing_values():
    base = RunConfig(suite="cones", seed=4)
    merged = merge_overrides(base, {"seed": None, "samples": 20})
    assert merged.seed == 4
    assert merged.samples == 20
    assert merged.suite == "cones"
