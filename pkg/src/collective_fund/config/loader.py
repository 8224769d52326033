"""Reading and writing experiment configuration files."""

from collections.abc import Mapping
from pathlib import Path
from typing import Any

import yaml

from collective_fund.config.models import Config

RESOLVED_HEADER = "# Resolved configuration; pass back with --config to reproduce this run.\n"


def _read_mapping(config_path: Path) -> dict[str, Any]:
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")
    try:
        data = yaml.safe_load(config_path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ValueError(f"Invalid YAML in config file: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"YAML root must be a mapping, not {type(data).__name__}")
    return data


def merge_overrides(
    data: Mapping[str, Any], overrides: Mapping[str, Mapping[str, Any]]
) -> dict[str, Any]:
    """
    Overlay per-section values onto raw config data.

    None values mean "not given" and leave the file value in place.
    """
    merged = dict(data)
    for section, values in overrides.items():
        given = {key: value for key, value in values.items() if value is not None}
        if given:
            current = merged.get(section) or {}
            if not isinstance(current, dict):
                raise ValueError(f"config section {section!r} must be a mapping")
            merged[section] = {**current, **given}
    return merged


def load_config(
    config_path: Path | None,
    overrides: Mapping[str, Mapping[str, Any]] | None = None,
) -> Config:
    """
    Load configuration from a YAML file (or defaults) plus command-line overrides.

    Overrides are validated together with the file, so an out-of-range
    value given on the command line is rejected the same way.

    Args:
        config_path: Path to YAML config file, or None for defaults.
        overrides: Section name to {key: value}; None values are skipped.

    Returns:
        Validated Config object.

    Raises:
        FileNotFoundError: If config_path doesn't exist.
        ValueError: If YAML is invalid or its root is not a mapping.
        pydantic.ValidationError: If a value is out of range or a key is unknown.
    """
    data = {} if config_path is None else _read_mapping(config_path)
    if overrides:
        data = merge_overrides(data, overrides)
    return Config(**data)


def dump_config(config: Config, path: Path) -> None:
    """
    Write the resolved configuration so that `load_config` reproduces it.

    Args:
        config: Configuration actually used by a run.
        path: Destination YAML file.
    """
    body = yaml.safe_dump(config.to_yaml_dict(), sort_keys=False)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(RESOLVED_HEADER + body)
