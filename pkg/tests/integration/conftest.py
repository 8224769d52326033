"""Integration test fixtures."""

from pathlib import Path

import pytest
import yaml

from tests.factories import fast_config_data


@pytest.fixture
def config_file(tmp_path: Path, table_csv: Path) -> Path:
    """A small YAML configuration on the short mortality table."""
    data = fast_config_data(table_csv, tmp_path / "results")
    data["fund"]["kinds"] = ["annuity", "individual", "collective_infinite", "collective_finite"]
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    """Where the CLI writes; matches `config_file`."""
    return tmp_path / "results"
