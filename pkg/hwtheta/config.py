"""
Run configuration: built-in defaults < YAML file < HWTHETA_* environment.
Command-line flags are applied on top by the caller.
"""

from __future__ import annotations

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from hwtheta.errors import ConfigError

logger = logging.getLogger(__name__)

BASE_DIR = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG_FILE = BASE_DIR / "config.yaml"

DEFAULTS: Dict[str, Any] = {
    "seed": 7,
    "trials": 500,
    "steps": 50,
    "walk_word_length": 4,
    "random_word_length": 6,
    "random_terms": 4,
    "log_level": "WARNING",
    "server": {"host": "127.0.0.1", "port": 8501},
    "report_path": "results/acceptance.json",
}

ENV_OVERRIDES = {
    "HWTHETA_SEED": ("seed", int),
    "HWTHETA_TRIALS": ("trials", int),
    "HWTHETA_STEPS": ("steps", int),
    "HWTHETA_LOG_LEVEL": ("log_level", str),
}

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _check(cfg: Dict[str, Any], source: str):
    for key, value in cfg.items():
        if key not in DEFAULTS:
            raise ConfigError(f"{source}: unknown key {key!r}")
        expected = type(DEFAULTS[key])
        if key == "server":
            if not isinstance(value, dict):
                raise ConfigError(f"{source}: 'server' must be a mapping")
            for sub, v in value.items():
                if sub not in DEFAULTS["server"]:
                    raise ConfigError(f"{source}: unknown key 'server.{sub}'")
                if not isinstance(v, type(DEFAULTS["server"][sub])) or isinstance(v, bool):
                    raise ConfigError(f"{source}: 'server.{sub}' must be {type(DEFAULTS['server'][sub]).__name__}")
            continue
        if isinstance(value, bool) or not isinstance(value, expected):
            raise ConfigError(f"{source}: {key!r} must be {expected.__name__}, got {value!r}")
        if expected is int and value < 0:
            raise ConfigError(f"{source}: {key!r} must be >= 0, got {value}")
    level = cfg.get("log_level")
    if level is not None and level.upper() not in LOG_LEVELS:
        raise ConfigError(f"{source}: log_level must be one of {', '.join(LOG_LEVELS)}")


def _merge(base: Dict[str, Any], extra: Dict[str, Any]):
    for key, value in extra.items():
        if key == "server":
            base["server"].update(value)
        else:
            base[key] = value


def load_config(path: Optional[str] = None, env: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
    """
    Defaults, then the YAML file (explicit path, $HWTHETA_CONFIG, or config.yaml
    next to the package when it exists), then the environment overrides.
    """
    env = os.environ if env is None else env
    cfg = copy.deepcopy(DEFAULTS)

    explicit = path or env.get("HWTHETA_CONFIG")
    file = Path(explicit) if explicit else DEFAULT_CONFIG_FILE
    if explicit and not file.exists():
        raise ConfigError(f"config file not found: {file}")
    if file.exists():
        try:
            loaded = yaml.safe_load(file.read_text(encoding="utf8")) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"{file}: invalid YAML: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigError(f"{file}: top level must be a mapping")
        _check(loaded, str(file))
        _merge(cfg, loaded)
        logger.info("loaded config from %s", file)

    overrides = {}
    for var, (key, kind) in ENV_OVERRIDES.items():
        raw = env.get(var)
        if raw is None or raw == "":
            continue
        try:
            overrides[key] = kind(raw)
        except ValueError:
            raise ConfigError(f"{var}={raw!r} is not a valid {kind.__name__}") from None
    _check(overrides, "environment")
    _merge(cfg, overrides)
    return cfg
