import json

import pytest

from src.core.exceptions import ConfigError
from src.utils.config_manager import ConfigManager
from src.utils.constants import COMMAND_DEFAULTS, DEFAULT_SETTINGS, EFFECTIVE_CONFIG_NAME, SEED_ENV_VAR


@pytest.fixture
def manager():
    return ConfigManager()


def test_defaults_fill_the_schema(manager):
    config = manager.build_run_config("fit", overrides={"seed": 4})
    assert config["command"] == "fit"
    assert config["seed"] == 4
    for key, value in {**DEFAULT_SETTINGS, **COMMAND_DEFAULTS["fit"]}.items():
        if key != "seed":
            assert config[key] == value


def test_command_line_beats_file(manager):
    config = manager.build_run_config(
        "generate", {"n": 50, "p": 0.2, "seed": 1}, {"n": 70, "output_dir": "elsewhere"},
    )
    assert (config["n"], config["p"], config["output_dir"]) == (70, 0.2, "elsewhere")


def test_none_overrides_are_ignored(manager):
    config = manager.build_run_config("generate", {"n": 50, "seed": 1}, {"n": None})
    assert config["n"] == 50


def test_defaults_are_not_shared(manager):
    config = manager.build_run_config("scenario-gains", overrides={"seed": 1})
    config["targets"].append(9.0)
    assert len(COMMAND_DEFAULTS["scenario-gains"]["targets"]) == 4


@pytest.mark.parametrize("overrides", [
    {"nodes": 10},
    {"n": "abc"},
    {"n": 2.5},
    {"n": True},
    {"p": "high"},
    {"replicates": 0},
    {"jobs": 0},
    {"lp_backend": "cplex"},
    {"log_level": "LOUD"},
    {"seed": 1.5},
])
def test_invalid_values(manager, overrides):
    with pytest.raises(ConfigError):
        manager.build_run_config("generate", overrides=overrides)


def test_coercions(manager):
    config = manager.build_run_config("rewire", {"stop_early": "true", "max_steps": "500", "seed": "7",
                                                 "log_level": "debug"})
    assert config["stop_early"] is True
    assert config["max_steps"] == 500
    assert config["seed"] == 7
    assert config["log_level"] == "DEBUG"

    bounds = manager.build_run_config("bounds", {"condition_values": 0.5, "graphs": "g.txt"})
    assert bounds["condition_values"] == [0.5]
    assert bounds["graphs"] == ["g.txt"]


def test_targets_need_four_values(manager):
    with pytest.raises(ConfigError, match="four values"):
        manager.build_run_config("solve-eta", {"targets": [0.1, 0.2, 0.3]})


def test_config_written_for_other_command(manager):
    with pytest.raises(ConfigError, match="written for 'rewire'"):
        manager.build_run_config("generate", {"command": "rewire"})
    with pytest.raises(ConfigError, match="unknown command"):
        manager.build_run_config("plot")


def test_seed_resolution(manager, monkeypatch):
    monkeypatch.setenv(SEED_ENV_VAR, "123")
    assert manager.build_run_config("generate")["seed"] == 123
    monkeypatch.setenv(SEED_ENV_VAR, "abc")
    with pytest.raises(ConfigError, match=SEED_ENV_VAR):
        manager.build_run_config("generate")
    monkeypatch.delenv(SEED_ENV_VAR)
    assert isinstance(ConfigManager.resolve_seed(), int)


def test_commands_without_seed(manager):
    assert "seed" not in manager.build_run_config("assort")


def test_save_and_reload(manager, tmp_path):
    config = manager.build_run_config("rewire", {"graphs": ["a.txt", "b.txt"], "targets": [0.1] * 4, "seed": 3})
    path = manager.save_config(config, str(tmp_path / "out"))
    assert path.endswith(EFFECTIVE_CONFIG_NAME)
    stored = manager.load_config(path)
    assert manager.build_run_config("rewire", stored) == config


def test_load_config_errors(manager, tmp_path):
    assert manager.load_config(None) == {}
    with pytest.raises(ConfigError, match="not found"):
        manager.load_config(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError, match="invalid JSON"):
        manager.load_config(str(broken))
    listing = tmp_path / "list.json"
    listing.write_text(json.dumps([1, 2]), encoding="utf-8")
    with pytest.raises(ConfigError, match="JSON object"):
        manager.load_config(str(listing))
