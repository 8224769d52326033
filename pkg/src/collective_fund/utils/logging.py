"""loguru setup for the CLI.

Console records always go to stderr; stdout carries only the summary
lines of a run. Records from the stdlib `logging` module and Python
warnings (numpy overflow, scipy convergence) are routed into the same
sinks.
"""

import logging
import sys
from typing import Any

from loguru import logger

from collective_fund.config.models import LoggingConfig

CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - "
    "<level>{message}</level>"
)


class _InterceptHandler(logging.Handler):
    """Forward stdlib records to loguru at the caller's depth."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level: str | int = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        frame, depth = logging.currentframe(), 2
        while frame and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back  # type: ignore[assignment]
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def _sinks(config: LoggingConfig) -> list[dict[str, Any]]:
    serialize = config.format == "json"
    common: dict[str, Any] = {
        "level": config.level,
        "serialize": serialize,
        "format": "{message}" if serialize else CONSOLE_FORMAT,
    }
    handlers = [{"sink": sys.stderr, "colorize": not serialize, **common}]
    if config.file:
        handlers.append(
            {
                "sink": config.file,
                "rotation": config.rotation,
                "retention": config.retention,
                "compression": "gz",
                **common,
            }
        )
    return handlers


def configure_logging(config: LoggingConfig) -> None:
    """
    Replace every loguru sink with the ones `config` asks for.

    Args:
        config: LoggingConfig with level, format and optional file sink.
    """
    logger.configure(handlers=_sinks(config))
    logging.basicConfig(handlers=[_InterceptHandler()], level=0, force=True)
    logging.captureWarnings(True)
    logger.debug("Logging configured: level={} format={}", config.level, config.format)
