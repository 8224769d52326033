"""Configuration management for collective fund experiments."""

from collective_fund.config.loader import dump_config, load_config
from collective_fund.config.models import Config, GridConfig, LoggingConfig

__all__ = ["Config", "GridConfig", "LoggingConfig", "dump_config", "load_config"]
