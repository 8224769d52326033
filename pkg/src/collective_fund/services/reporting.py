"""CSV emission for experiment results.

Results are staged in memory and written together once the command has
computed everything, each file atomically, so a failing run leaves no
partial CSVs behind.
"""

from pathlib import Path

import pandas as pd
from loguru import logger

from collective_fund.config.loader import dump_config
from collective_fund.config.models import Config
from collective_fund.errors import ReportError
from collective_fund.utils.files import write_text_atomic

RESOLVED_CONFIG = "resolved_config.yaml"


def frame_to_csv(frame: pd.DataFrame, seed: int) -> str:
    """CSV text: a `# seed=...` comment line, the header, then one row per record."""
    body = frame.to_csv(index=False, lineterminator="\n")
    return f"# seed={seed}\n{body}"


class ReportWriter:
    """Collects result tables and writes them in one go."""

    def __init__(self, out_dir: Path, seed: int) -> None:
        self.out_dir = out_dir
        self.seed = seed
        self._pending: dict[str, str] = {}

    @property
    def pending(self) -> list[str]:
        return list(self._pending)

    def add(self, name: str, frame: pd.DataFrame) -> None:
        """Stage `frame` as `<out_dir>/<name>`."""
        self._pending[name] = frame_to_csv(frame, self.seed)

    def commit(self, config: Config) -> list[Path]:
        """
        Write every staged CSV and the resolved configuration.

        Raises:
            ReportError: If a file cannot be written.
        """
        written = []
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            for name, text in self._pending.items():
                path = self.out_dir / name
                write_text_atomic(path, text)
                written.append(path)
            config_path = self.out_dir / RESOLVED_CONFIG
            dump_config(config, config_path)
            written.append(config_path)
        except OSError as e:
            raise ReportError(f"cannot write results to {self.out_dir}: {e}") from e
        self._pending.clear()
        logger.info("Wrote {} files to {}", len(written), self.out_dir)
        return written
