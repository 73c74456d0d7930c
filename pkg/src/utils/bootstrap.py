"""
Index Policy Evaluation Toolkit

Module: bootstrap.py

Configuration management: the default configuration, strict loading of
JSON configuration files, dot-path overrides and worker-count resolution.

A configuration file only needs the keys it changes; they are merged onto
DEFAULT_CONFIG. Unknown keys at any depth are rejected, since a misspelled
setting silently falling back to its default would corrupt an experiment.
"""

import copy
import json
import os
from typing import Any, Dict, List, Optional

from src.core.errors import ConfigurationError

# Define a type alias for the logger to avoid circular imports
LoggerType = Any

DEFAULT_CONFIG: Dict[str, Any] = {
    "simulator": {
        "domain": "synthetic",
        "n": 2000,
        "horizon": 10,
        "effect_cap": 0.2,
        "covariate_dim": 0,
        "corner_sigma": 0.05,
        "corner_center": "alpha",
        "prior_strength": 5.0,
        "initial_state": "stationary",
        "pool_path": None,
        "pool_size": 100,
    },
    "policy": {
        "index_kind": "whittle",
        "alpha": 0.2,
        "rounds": 1,
        "custom_column": 0,
        "discount": 0.9,
        "evaluation_state": 0,
        "whittle_tol": 1e-6,
    },
    "experiment": {
        "seed": 0,
        "replicates": 500,
        "estimators": ["base", "subgroup"],
        "level": 0.95,
        "truncate_at": None,
        "upto_round": None,
        "estimand_reps": 1000,
        "sweep": None,
        "fixed_total_budget": True,
    },
    "inference": {
        "subgroup_variance": "sg_simple",
        "base_variance": "base_knn",
        "k": None,
        "ols_cov": "classical",
        "hybrid_weight": "auto",
    },
    "corner_case": {
        "n": 500,
        "alpha": 0.5,
        "sigma": 0.05,
        "replicates": 10000,
    },
    "output": {
        "dir": "outputs",
        "datasets": 1,
    },
    "workers": None,
}

# Overrides selected with --full-scale
FULL_SCALE: Dict[str, Any] = {
    "simulator.n": 5000,
    "experiment.replicates": 1000,
}


def _unknown_keys(defaults: Dict[str, Any], given: Dict[str, Any], prefix: str = "") -> List[str]:
    unknown = []
    for key, value in given.items():
        path = f"{prefix}{key}"
        if key not in defaults:
            unknown.append(path)
        elif isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                unknown.append(f"{path} (expected a section)")
            else:
                unknown.extend(_unknown_keys(defaults[key], value, prefix=f"{path}."))
    return unknown


def _deep_merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in update.items():
        if isinstance(merged.get(key), dict) and isinstance(value, dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def validate_config(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merge a partial configuration onto the defaults.

    Args:
        config: Partial configuration dictionary

    Returns:
        dict: Complete configuration

    Raises:
        ConfigurationError: If any key is not part of DEFAULT_CONFIG
    """
    if not isinstance(config, dict):
        raise ConfigurationError("the configuration must be a JSON object")
    unknown = _unknown_keys(DEFAULT_CONFIG, config)
    if unknown:
        raise ConfigurationError(f"unknown configuration keys: {', '.join(unknown)}")
    return _deep_merge(DEFAULT_CONFIG, config)


def load_config(config_file: Optional[str] = None, logger: Optional[LoggerType] = None) -> Dict[str, Any]:
    """
    Load a configuration file, or the defaults when no file is given.

    Args:
        config_file: Path to a JSON configuration file
        logger: Logger instance for status messages

    Returns:
        dict: Complete configuration

    Raises:
        ConfigurationError: If the file is missing, is not valid JSON or has unknown keys
    """
    if logger is None:
        from src.utils.logger import get_logger
        logger = get_logger(name="bootstrap")

    if config_file is None:
        logger.info("[+] No config file given, using defaults")
        return copy.deepcopy(DEFAULT_CONFIG)
    if not os.path.exists(config_file):
        logger.error(f"[X] Config file not found: {config_file}")
        raise ConfigurationError(f"config file not found: {config_file}")

    try:
        with open(config_file, 'r', encoding='utf-8') as f:
            loaded = json.load(f)
    except json.JSONDecodeError as e:
        logger.error(f"[X] Failed to parse config: {e}")
        raise ConfigurationError(f"{config_file}: invalid JSON at line {e.lineno}: {e.msg}") from e

    config = validate_config(loaded)
    logger.info(f"[+] Loaded configuration from {config_file}")
    return config


def save_config(config: Dict[str, Any], config_file: str, logger: Optional[LoggerType] = None) -> None:
    """
    Save a configuration dictionary as indented JSON.

    Args:
        config: Configuration dictionary to save
        config_file: Destination path
        logger: Logger instance for status messages
    """
    if logger is None:
        from src.utils.logger import get_logger
        logger = get_logger(name="bootstrap")

    directory = os.path.dirname(config_file)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(config_file, 'w', encoding='utf-8') as f:
        json.dump(config, f, indent=2)
        f.write("\n")
    logger.info(f"[+] Configuration saved to {config_file}")


def parse_override_value(raw: str) -> Any:
    """JSON value when the text parses as JSON, else the raw string."""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_override(config: Dict[str, Any], key_path: str, value: Any) -> Dict[str, Any]:
    """
    Set a value in the configuration using a dot-separated path.

    Args:
        config: Complete configuration, updated in place
        key_path: Dot-separated path, e.g. "policy.alpha"
        value: New value

    Returns:
        dict: The updated configuration

    Raises:
        ConfigurationError: If the path does not name a setting of DEFAULT_CONFIG
    """
    keys = key_path.split('.')
    defaults: Any = DEFAULT_CONFIG
    current = config
    for depth, key in enumerate(keys):
        if not isinstance(defaults, dict) or key not in defaults:
            raise ConfigurationError(f"unknown configuration key: {key_path}")
        if depth == len(keys) - 1:
            break
        defaults = defaults[key]
        current = current.setdefault(key, {})
    if isinstance(defaults[keys[-1]], dict):
        raise ConfigurationError(f"{key_path} is a section, override one of its keys instead")
    current[keys[-1]] = value
    return config


def apply_overrides(config: Dict[str, Any], assignments: List[str]) -> Dict[str, Any]:
    """
    Apply "key.path=value" assignments from the command line.

    Raises:
        ConfigurationError: If an assignment has no '=' or names an unknown key
    """
    for assignment in assignments:
        key_path, sep, raw = assignment.partition("=")
        if not sep or not key_path:
            raise ConfigurationError(f"override '{assignment}' must have the form key.path=value")
        apply_override(config, key_path.strip(), parse_override_value(raw.strip()))
    return config


def resolve_workers(flag: Optional[int], config: Dict[str, Any]) -> int:
    """
    Worker count: the flag, else POLICY_EVAL_WORKERS, else the config, else half the CPUs.

    Raises:
        ConfigurationError: If the chosen value is not a positive integer
    """
    from src.experiments.runner import WORKERS_ENV, default_workers

    if flag is not None:
        workers = flag
    elif os.environ.get(WORKERS_ENV):
        return default_workers()
    elif config.get("workers") is not None:
        workers = config["workers"]
    else:
        return default_workers()
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
        raise ConfigurationError(f"workers must be a positive integer, got {workers!r}")
    return workers
