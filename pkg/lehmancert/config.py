"""Configuration loader for lehmancert.

Provides YAML + environment variable merged configuration with helper access
via `get`. Built-in defaults encode the flagship parameter set so the tool runs
without any config file; `config.yaml` and environment variables override them.
"""

import copy
import logging
import os
from typing import Any, Optional

import yaml
from dotenv import load_dotenv

DEFAULTS: dict[str, Any] = {
    "catalog": {
        "path": None,
        "accuracy": 1e-9,
    },
    "certify": {
        "variant": "refined",
        "alpha": 1.34e11,
        "omega": 727.952018,
        "eta": 1.6e-4,
        "A": 1.022e7,
        "T": 1131944.4718,
        "rh_mode": False,
        "printed_bounds": False,
    },
    "zero_sum": {
        "chunk_size": 65536,
        "threads": 0,
    },
    "scan": {
        "points": 500,
        "threshold": -0.16,
        "panel_width": 20.0,
    },
    "oracle": {
        "max_x": 10_000_000,
        "samples": 10_000,
        "seed": 20240601,
    },
    "store": {
        "db_path": "certificates.db",
        "max_certificates": 10_000,
    },
}


def _find_config_file() -> Optional[str]:
    """Return path to `config.yaml` in current directory if present, else None."""
    if os.path.isfile("config.yaml"):
        return "config.yaml"
    return None


def _find_env_file() -> Optional[str]:
    """Return path to `.env` in current or parent directory if present, else None."""
    if os.path.isfile(".env"):
        return ".env"
    if os.path.isfile("../.env"):
        return "../.env"
    return None


def _load_env_file() -> None:
    """Load environment variables from a discovered .env file (best-effort)."""
    env_file = _find_env_file()
    if env_file:
        try:
            load_dotenv(env_file)
            logging.debug(f"Loaded environment from {env_file}")
        except Exception as e:
            logging.warning(f"Failed to load {env_file}: {e}")


def _deep_merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Return a copy of `base` with `override` merged in, section by section."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _apply_env_overrides(config: dict[str, Any]) -> None:
    """Apply LEHMANCERT_* environment variables in place."""
    if os.environ.get("LEHMANCERT_ZEROS_FILE"):
        config["catalog"]["path"] = os.environ["LEHMANCERT_ZEROS_FILE"]
    if os.environ.get("LEHMANCERT_STORE_DB"):
        config["store"]["db_path"] = os.environ["LEHMANCERT_STORE_DB"]
    for env_name, key in (("LEHMANCERT_THREADS", "threads"), ("LEHMANCERT_CHUNK_SIZE", "chunk_size")):
        raw = os.environ.get(env_name)
        if not raw:
            continue
        try:
            config["zero_sum"][key] = int(raw)
        except ValueError:
            logging.warning(f"Invalid {env_name} value: {raw}")


def load_config(config_path: Optional[str] = None) -> dict[str, Any]:
    """Load configuration, merging YAML file and environment overrides over defaults.

    Args:
            config_path: Optional path to a YAML file. If not provided, ./config.yaml
                    is used when present; otherwise only defaults and environment apply.

    Returns:
            Dict with every section of DEFAULTS present.

    Raises:
            FileNotFoundError: If an explicit `config_path` does not exist.
            ValueError: If the YAML file is invalid or has a malformed section.
    """
    _load_env_file()

    if config_path is not None and not os.path.isfile(config_path):
        raise FileNotFoundError(f"config file not found: {config_path}")
    if config_path is None:
        config_path = _find_config_file()

    config = copy.deepcopy(DEFAULTS)
    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                loaded = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in {config_path}: {e}")
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ValueError(f"{config_path} must contain a YAML dictionary")
        for section, value in loaded.items():
            if section in DEFAULTS and not isinstance(value, dict):
                raise ValueError(f"{config_path}: section '{section}' must be a mapping")
        config = _deep_merge(config, loaded)
        logging.info(f"Loaded configuration from {config_path}")

    _apply_env_overrides(config)
    return config


# Global config instance (loaded on first use, not at import)
config: Optional[dict[str, Any]] = None


def _ensure_config_loaded() -> None:
    """Load config if not already loaded."""
    global config
    if config is None:
        config = load_config()


def set_config(new_config: dict[str, Any]) -> None:
    """Install an already loaded configuration as the global one."""
    global config
    config = new_config


def reset_config() -> None:
    """Forget the global configuration so the next `get` reloads it."""
    global config
    config = None


def get(key_path: str, default: Any = None) -> Any:
    """Return config value at dot-separated path or `default` if missing.

    Examples:
            get('certify.alpha') -> 134000000000.0
            get('zero_sum.chunk_size') -> 65536
            get('nonexistent', 'fallback') -> 'fallback'
    """
    _ensure_config_loaded()
    keys = key_path.split(".")
    val: Any = config
    for key in keys:
        if isinstance(val, dict) and key in val:
            val = val[key]
        else:
            return default
    return val
