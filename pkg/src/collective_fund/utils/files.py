"""Atomic file writes for experiment output."""

import os
from pathlib import Path

from loguru import logger


def write_text_atomic(path: Path, text: str) -> None:
    """
    Write UTF-8 text with `\\n` line endings via a temp file and `os.replace()`.

    Readers never observe a partially written file.

    Args:
        path: Destination file.
        text: Full file content.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(path.name + ".tmp")
    try:
        with tmp_path.open("w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except OSError:
        tmp_path.unlink(missing_ok=True)
        raise
    logger.debug("Wrote {}", path)
