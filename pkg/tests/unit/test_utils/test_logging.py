"""Tests for logging configuration."""

import logging
from collections.abc import Iterator
from pathlib import Path

import pytest
from loguru import logger

from collective_fund.config.models import LoggingConfig
from collective_fund.utils.logging import configure_logging


@pytest.fixture(autouse=True)
def _restore_logger() -> Iterator[None]:
    yield
    logger.remove()
    logging.captureWarnings(False)
    logging.basicConfig(handlers=[], force=True)


class TestConfigureLogging:
    """Test configure_logging function."""

    def test_console_goes_to_stderr(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Console output stays off stdout."""
        configure_logging(LoggingConfig(level="INFO"))
        logger.info("solving")
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "solving" in captured.err

    def test_level_filters(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Messages below the level are dropped."""
        configure_logging(LoggingConfig(level="WARNING"))
        logger.info("quiet")
        assert "quiet" not in capsys.readouterr().err

    def test_json_format(self, capsys: pytest.CaptureFixture[str]) -> None:
        """json format serialises records."""
        configure_logging(LoggingConfig(format="json"))
        logger.info("structured")
        err = capsys.readouterr().err
        assert '"message": "structured"' in err

    def test_standard_logging_intercepted(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Standard library records reach the loguru sink."""
        configure_logging(LoggingConfig(level="INFO"))
        logging.getLogger("scipy").warning("bridged")
        assert "bridged" in capsys.readouterr().err

    def test_file_sink(self, tmp_path: Path) -> None:
        """A configured file receives records too."""
        log_file = tmp_path / "run.log"
        configure_logging(LoggingConfig(file=log_file))
        logger.info("to file")
        logger.complete()
        assert "to file" in log_file.read_text()
