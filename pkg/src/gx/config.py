"""Configuration loader: YAML file with environment variable fallbacks."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class LawsConfig:
    seed: int = 0
    complexes: int = 20
    trials: int = 10
    workers: int = 1


@dataclass
class GxConfig:
    max_arf_dim: int = 24  # Gauss sums enumerate 2**n vectors
    max_sh2_dim: int = 16  # order-4 lift search enumerates 2**dim SH^2 classes
    order_bound: int = 64
    log_level: str = "WARNING"
    laws: LawsConfig = field(default_factory=LawsConfig)

    @property
    def logging_level(self) -> int:
        return int(getattr(logging, self.log_level))


def _resolve_data_dir() -> Path:
    return Path.home() / ".gx"


def _get_config_path(data_dir: Path | None = None) -> Path:
    env_path = os.environ.get("GX_CONFIG")
    if env_path and data_dir is None:
        return Path(os.path.expanduser(env_path))
    return (data_dir or _resolve_data_dir()) / "config.yaml"


def _positive_int(name: str, value: Any) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise ValueError(f"Config value '{name}' must be an integer, got {value!r}") from None
    if number < 1:
        raise ValueError(f"Config value '{name}' must be positive, got {number}")
    return number


def _setting(raw: dict[str, Any], key: str, env_value: str | None, default: Any) -> Any:
    """A file value when the key is present, else the environment, else the default."""
    value = raw.get(key)
    if value is None:
        return env_value or default
    return value


def load_config(config_path: Path | None = None) -> GxConfig:
    raw: dict[str, Any] = {}
    path = config_path or _get_config_path()

    if path.exists():
        with open(path) as f:
            raw = yaml.safe_load(f) or {}
    elif config_path is not None:
        raise ValueError(f"Config file not found: {config_path}")

    if not isinstance(raw, dict):
        raise ValueError(f"Config file {path} must contain a mapping at top level")

    # GX_MAX_DIM guards both exhaustive searches
    max_dim_env = os.environ.get("GX_MAX_DIM")
    max_arf_dim = _positive_int("max_arf_dim", _setting(raw, "max_arf_dim", max_dim_env, 24))
    max_sh2_dim = _positive_int("max_sh2_dim", _setting(raw, "max_sh2_dim", max_dim_env, 16))
    order_bound = _positive_int("order_bound", _setting(raw, "order_bound", os.environ.get("GX_ORDER_BOUND"), 64))

    log_level = str(_setting(raw, "log_level", os.environ.get("GX_LOG_LEVEL"), "WARNING")).upper()
    if log_level not in _LOG_LEVELS:
        raise ValueError(f"Config value 'log_level' must be one of {', '.join(_LOG_LEVELS)}, got {log_level!r}")

    laws_raw = raw.get("laws", {}) or {}
    seed_raw = laws_raw.get("seed", 0)
    try:
        seed = int(seed_raw)
    except (TypeError, ValueError):
        raise ValueError(f"Config value 'laws.seed' must be an integer, got {seed_raw!r}") from None
    laws = LawsConfig(
        seed=seed,
        complexes=_positive_int("laws.complexes", laws_raw.get("complexes", 20)),
        trials=_positive_int("laws.trials", laws_raw.get("trials", 10)),
        workers=_positive_int("laws.workers", laws_raw.get("workers", 1)),
    )

    return GxConfig(
        max_arf_dim=max_arf_dim,
        max_sh2_dim=max_sh2_dim,
        order_bound=order_bound,
        log_level=log_level,
        laws=laws,
    )
