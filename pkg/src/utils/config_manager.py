"""
Ayarlar yönetimi - JSON tabanlı çalışma config sistemi
"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from .constants import COMMAND_DEFAULTS, DEFAULT_SETTINGS, EFFECTIVE_CONFIG_NAME, LP_BACKENDS, SEED_ENV_VAR
from ..core.exceptions import ConfigError

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ConfigManager:
    """Ayarlar yönetim sınıfı

    Öncelik sırası: varsayılanlar < config dosyası < komut satırı.
    Şemada olmayan anahtarlar reddedilir; değerler varsayılanın tipine
    dönüştürülür. Tohum verilmemişse DIDPR_SEED, o da yoksa işletim
    sistemi entropisi kullanılır ve etkin config'e yazılır.
    """

    def load_config(self, config_path: Optional[str]) -> dict:
        """Config dosyasını yükle"""
        if not config_path:
            return {}
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                config = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON in {path}: {e}") from None
        if not isinstance(config, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        return config

    def build_run_config(self, command: str, file_config: Optional[dict] = None,
                         overrides: Optional[dict] = None) -> dict:
        """Etkin çalışma config'ini oluştur ve doğrula"""
        if command not in COMMAND_DEFAULTS:
            raise ConfigError(f"unknown command {command!r}")
        schema = {**DEFAULT_SETTINGS, **COMMAND_DEFAULTS[command]}

        file_config = dict(file_config or {})
        stored_command = file_config.pop("command", command)
        if stored_command != command:
            raise ConfigError(f"config was written for {stored_command!r}, not {command!r}")

        config: Dict[str, Any] = {key: _copy(value) for key, value in schema.items()}
        for source in (file_config, overrides or {}):
            for key, value in source.items():
                if key not in schema:
                    raise ConfigError(f"unknown config key {key!r} for {command}")
                if value is None:
                    continue
                config[key] = _coerce(key, value, schema[key])

        self._validate(config)
        if "seed" in config and config["seed"] is None:
            config["seed"] = self.resolve_seed()
        config["command"] = command
        return config

    @staticmethod
    def resolve_seed() -> int:
        """DIDPR_SEED veya yeni entropi"""
        env_value = os.environ.get(SEED_ENV_VAR)
        if env_value:
            try:
                return int(env_value)
            except ValueError:
                raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env_value!r}") from None
        seed = int(np.random.SeedSequence().entropy)
        logger.info("Tohum verilmedi, yeni tohum: %d", seed)
        return seed

    @staticmethod
    def _validate(config: dict):
        if config["lp_backend"] not in LP_BACKENDS:
            raise ConfigError(f"lp_backend must be one of {', '.join(LP_BACKENDS)}")
        if str(config["log_level"]).upper() not in LOG_LEVELS:
            raise ConfigError(f"log_level must be one of {', '.join(LOG_LEVELS)}")
        config["log_level"] = str(config["log_level"]).upper()
        if config["jobs"] < 1:
            raise ConfigError("jobs must be at least 1")
        for key in ("replicates", "max_steps", "checkpoint_every", "edges", "n", "n_tail", "sim_edges"):
            if key in config and config[key] is not None and config[key] < 1:
                raise ConfigError(f"{key} must be at least 1")
        if "targets" in config and config["targets"] and len(config["targets"]) != 4:
            raise ConfigError("targets must hold four values: r11 r12 r21 r22")

    def save_config(self, config: dict, directory: str) -> str:
        """Etkin config'i çıktı dizinine kaydet"""
        path = Path(directory) / EFFECTIVE_CONFIG_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(config, f, indent=2, ensure_ascii=False, sort_keys=True)
        return str(path)


def _copy(value):
    return list(value) if isinstance(value, list) else value


def _coerce(key: str, value, default):
    """Değeri varsayılanın tipine dönüştür"""
    try:
        if isinstance(default, bool):
            if isinstance(value, bool):
                return value
            if isinstance(value, str) and value.lower() in ("true", "false"):
                return value.lower() == "true"
            raise ValueError
        if isinstance(default, int):
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise ValueError
            return int(float(value))
        if isinstance(default, float):
            if isinstance(value, bool):
                raise ValueError
            return float(value)
        if isinstance(default, list):
            if isinstance(value, (str, int, float)):
                value = [value]
            if key in ("targets", "condition_values"):
                return [float(v) for v in value]
            return [str(v) for v in value]
        if isinstance(default, str):
            return str(value)
        if key == "seed":
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise ValueError
            return int(value)
        if key in ("alpha", "beta", "gamma"):
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value {value!r} for {key!r}") from None
