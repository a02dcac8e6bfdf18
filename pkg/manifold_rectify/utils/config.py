#!/usr/bin/env python3
"""
Configuration utilities for loading and validating YAML configuration files.

Precedence (later overrides earlier):
1. Package defaults (manifold_rectify/config/default_config.yaml)
2. User YAML files passed with --config, merged in order
3. Environment variable overrides (GMR_*)
4. Explicit CLI flags (applied by the CLI with apply_overrides)
"""

import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from manifold_rectify.utils.report import status


class ConfigError(Exception):
    """Exception raised when configuration is invalid."""
    pass


DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "config" / "default_config.yaml"

# Configuration validation rules - defines expected types for specific paths
VALIDATION_RULES = {
    'gmr.k': int,
    'gmr.alpha': (int, float),
    'gmr.beta': (int, float),
    'gmr.gamma': (int, float),
    'gmr.epsilon': (int, float),
    'gmr.metric': str,
    'gmr.metric_threshold': int,
    'gmr.scarcity_floor': int,
    'split.test_fraction': (int, float),
    'benchmark.seeds': list,
    'benchmark.samplers': list,
    'benchmark.classifier_k': int,
    'benchmark.enn_k': int,
    'benchmark.synthetic_suite.*': (int, float),
    'experiments.*.*': (int, float),
    'report.show_active_config': bool,
    'report.reports_dir': str,
}

# Environment variable -> (dotted path, parser)
ENV_MAPPINGS = {
    'GMR_K': ('gmr.k', int),
    'GMR_ALPHA': ('gmr.alpha', float),
    'GMR_BETA': ('gmr.beta', float),
    'GMR_GAMMA': ('gmr.gamma', float),
    'GMR_EPSILON': ('gmr.epsilon', float),
    'GMR_METRIC': ('gmr.metric', str),
    'GMR_METRIC_THRESHOLD': ('gmr.metric_threshold', int),
    'GMR_SCARCITY_FLOOR': ('gmr.scarcity_floor', int),
    'GMR_REPORTS_DIR': ('report.reports_dir', str),
}


def get_config_value(config: Dict[str, Any], key_path: str, default: Any = None) -> Any:
    """
    Get a nested configuration value using dot notation.

    Examples:
        k = get_config_value(config, 'gmr.k', 15)
        seeds = get_config_value(config, 'benchmark.seeds', [42])
    """
    value = config
    try:
        for key in key_path.split('.'):
            value = value[key]
        return value
    except (KeyError, TypeError):
        return default


def set_config_value(config: Dict[str, Any], key_path: str, value: Any) -> None:
    """Set a nested configuration value using dot notation, creating sections as needed."""
    keys = key_path.split('.')
    node = config
    for key in keys[:-1]:
        node = node.setdefault(key, {})
    node[keys[-1]] = value


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """
    Deep merge two dictionaries with "override wins" semantics.

    Merge Rules:
        - Nested dicts are merged recursively
        - Lists are replaced entirely (no merging)
        - Primitive values in override replace base values
        - New keys from override are added

    Example:
        base = {'gmr': {'k': 15, 'alpha': 0.3}, 'benchmark': {'seeds': [42, 0]}}
        override = {'gmr': {'k': 10}, 'benchmark': {'seeds': [1]}}
        result = deep_merge(base, override)
        # {'gmr': {'k': 10, 'alpha': 0.3}, 'benchmark': {'seeds': [1]}}
    """
    result = base.copy()

    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = value

    return result


def load_default_config() -> Dict[str, Any]:
    """
    Load the default configuration shipped with the package.

    Raises:
        FileNotFoundError: If default config file is not found
        yaml.YAMLError: If YAML parsing fails
    """
    try:
        with open(DEFAULT_CONFIG_PATH, 'r') as f:
            return yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise FileNotFoundError(f"Default config file not found: {DEFAULT_CONFIG_PATH}")


def load_user_configs(paths: Optional[List[str]] = None) -> Dict[str, Any]:
    """
    Load user configuration files and merge them in order.

    A missing or unparsable user file is a ConfigError: the user asked
    for it explicitly.
    """
    merged_config: Dict[str, Any] = {}

    for path in paths or []:
        try:
            with open(path, 'r') as f:
                user_config = yaml.safe_load(f) or {}
        except FileNotFoundError:
            raise ConfigError(f"Configuration file {path} not found")
        except yaml.YAMLError as e:
            raise ConfigError(f"Error parsing YAML configuration {path}: {e}")
        if not isinstance(user_config, dict):
            raise ConfigError(f"Configuration file {path} must contain a mapping at top level")
        merged_config = deep_merge(merged_config, user_config)
        status(f"✅ Loaded user config from {path}")

    return merged_config


def load_env_overrides() -> Dict[str, Any]:
    """
    Load configuration overrides from GMR_* environment variables.

    Unknown environment variables are ignored.

    Raises:
        ConfigError: If a known variable does not parse
    """
    env_config: Dict[str, Any] = {}

    for env_var, (path, parser) in ENV_MAPPINGS.items():
        raw = os.getenv(env_var)
        if raw is None or raw == '':
            continue
        try:
            set_config_value(env_config, path, parser(raw))
        except ValueError:
            raise ConfigError(f"Environment variable {env_var}={raw!r} is not a valid {parser.__name__}")

    return env_config


def _get_nested_value(config: Dict[str, Any], path: str) -> Any:
    value = config
    try:
        for key in path.split('.'):
            if key == '*':
                return value
            value = value[key]
        return value
    except (KeyError, TypeError):
        return None


def _type_name(expected_type: Any) -> str:
    if isinstance(expected_type, tuple):
        return " or ".join(t.__name__ for t in expected_type)
    return expected_type.__name__


def _is_instance(value: Any, expected_type: Any) -> bool:
    # bool is an int subclass; a YAML `true` is never a valid number here
    if isinstance(value, bool) and expected_type is not bool:
        return False
    return isinstance(value, expected_type)


def _validate_wildcard_path(config: Dict[str, Any], path: str, expected_type: Any) -> List[str]:
    """Validate paths with wildcards (e.g., 'experiments.*.*')."""
    errors: List[str] = []
    path_parts = path.split('.')

    wildcard_idx = next((i for i, part in enumerate(path_parts) if part == '*'), None)
    if wildcard_idx is None:
        return errors

    base_path = '.'.join(path_parts[:wildcard_idx])
    base_value = _get_nested_value(config, base_path) if base_path else config

    if not isinstance(base_value, dict):
        return errors

    remaining = path_parts[wildcard_idx + 1:]

    for key, value in base_value.items():
        current_path = f"{base_path}.{key}" if base_path else key
        if not remaining:
            if not _is_instance(value, expected_type):
                errors.append(f"'{current_path}': expected {_type_name(expected_type)}, got {type(value).__name__}")
        elif remaining[0] == '*' and isinstance(value, dict):
            errors.extend(_validate_wildcard_path(config, '.'.join([current_path] + remaining), expected_type))

    return errors


def validate_config(config: Dict[str, Any]) -> List[str]:
    """
    Validate configuration types against VALIDATION_RULES.

    Returns:
        List of human-readable error messages. Empty if valid.
    """
    errors: List[str] = []

    for rule_path, expected_type in VALIDATION_RULES.items():
        if '*' in rule_path:
            errors.extend(_validate_wildcard_path(config, rule_path, expected_type))
            continue
        value = _get_nested_value(config, rule_path)
        if value is not None and not _is_instance(value, expected_type):
            errors.append(f"'{rule_path}': expected {_type_name(expected_type)}, got {type(value).__name__}")

    metric = get_config_value(config, 'gmr.metric')
    if isinstance(metric, str) and metric.lower() not in ('auto', 'euclidean', 'cosine'):
        errors.append(f"'gmr.metric': expected one of auto, euclidean, cosine, got {metric!r}")

    seeds = get_config_value(config, 'benchmark.seeds')
    if isinstance(seeds, list):
        for i, seed in enumerate(seeds):
            if not _is_instance(seed, int) or seed < 0:
                errors.append(f"'benchmark.seeds[{i}]': expected unsigned int, got {seed!r}")

    return errors


def get_config(paths: Optional[List[str]] = None) -> Dict[str, Any]:
    """
    Load complete configuration with deterministic precedence.

    Args:
        paths: Optional list of user config paths merged over the defaults

    Returns:
        Dict[str, Any]: Complete merged configuration

    Raises:
        ConfigError: On unreadable user files, or on validation errors when
            GMR_STRICT_CONFIG=1

    Example:
        config = get_config()
        config = get_config(['config/gmr_config.yaml'])
    """
    status("🔧 Loading configuration...")

    config = load_default_config()

    if paths:
        config = deep_merge(config, load_user_configs(paths))

    env_config = load_env_overrides()
    if env_config:
        config = deep_merge(config, env_config)
        status("✅ Applied environment variable overrides")

    validation_errors = validate_config(config)

    if validation_errors:
        error_message = "Configuration validation failed:\n" + "\n".join(f"  - {error}" for error in validation_errors)

        if os.getenv('GMR_STRICT_CONFIG', '0') == '1':
            raise ConfigError(error_message)
        status(f"⚠️  {error_message}")
        status("⚠️  Continuing with invalid configuration (set GMR_STRICT_CONFIG=1 for strict mode)")

    return config


def apply_overrides(config: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
    Apply dotted-path overrides (typically CLI flags); None values are skipped.

    Example:
        config = apply_overrides(config, {'gmr.k': 10, 'gmr.alpha': None})
    """
    patch: Dict[str, Any] = {}
    for path, value in overrides.items():
        if value is not None:
            set_config_value(patch, path, value)
    return deep_merge(config, patch)


def build_cleaning_config(config: Dict[str, Any]):
    """
    Build a validated CleaningConfig from the ``gmr`` section.

    Raises:
        ConfigError: If the section violates CleaningConfig invariants
    """
    from manifold_rectify.utils.cleaner import CleaningConfig
    from manifold_rectify.utils.geometry import Metric

    section = config.get('gmr', {})
    defaults = CleaningConfig()
    try:
        metric = Metric.parse(section.get('metric', defaults.metric.value))
    except ValueError as e:
        raise ConfigError(str(e))
    cleaning = CleaningConfig(
        k=section.get('k', defaults.k),
        alpha=section.get('alpha', defaults.alpha),
        beta=section.get('beta', defaults.beta),
        gamma=section.get('gamma', defaults.gamma),
        epsilon=section.get('epsilon', defaults.epsilon),
        metric=metric,
        metric_threshold=section.get('metric_threshold', defaults.metric_threshold),
        scarcity_floor=section.get('scarcity_floor', defaults.scarcity_floor),
    )
    cleaning.validate()
    return cleaning
