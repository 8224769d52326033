"""Test package initialization."""

import collective_fund


def test_version_exists() -> None:
    """Test that version is defined."""
    assert hasattr(collective_fund, "__version__")
    assert isinstance(collective_fund.__version__, str)


def test_version_format() -> None:
    """Test that version follows semver format."""
    version = collective_fund.__version__
    parts = version.split(".")
    assert len(parts) == 3, f"Version should have 3 parts: {version}"
    for part in parts:
        assert part.isdigit(), f"Version part should be numeric: {part}"
