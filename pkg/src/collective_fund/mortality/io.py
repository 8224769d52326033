"""Mortality table ingestion from `t,p` CSV files."""

from importlib import resources
from pathlib import Path

import numpy as np

from collective_fund.errors import ConfigurationError, ParseError, ValidationError
from collective_fund.mortality.table import MortalityTable

DEFAULT_TABLE = "cmi2018f_15"
_DATA_PACKAGE = "collective_fund.mortality.data"


def _parse_rows(text: str, source: str) -> tuple[list[float], list[float]]:
    times: list[float] = []
    masses: list[float] = []
    header_seen = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if not header_seen:
            if [f.lower() for f in fields] != ["t", "p"]:
                raise ParseError(f"expected header 't,p' in {source}, got {line!r}", line_no)
            header_seen = True
            continue
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", line_no)
        try:
            t, p = float(fields[0]), float(fields[1])
        except ValueError as e:
            raise ParseError(f"non-numeric value in {line!r}", line_no) from e
        if not (np.isfinite(t) and np.isfinite(p)):
            raise ParseError(f"non-finite value in {line!r}", line_no)
        if p < 0.0:
            raise ValidationError(f"negative death mass {p} at line {line_no}")
        times.append(t)
        masses.append(p)

    if not header_seen:
        raise ParseError(f"missing header 't,p' in {source}", 1)
    if not times:
        raise ValidationError(f"no rows in {source}")
    return times, masses


def _infer_dt(times: list[float]) -> float:
    if times[0] != 0.0:
        raise ValidationError(f"grid must start at t=0, starts at {times[0]}")
    if len(times) == 1:
        return 1.0
    steps = np.diff(np.asarray(times))
    dt = float(steps[0])
    if dt <= 0.0 or not np.allclose(steps, dt, rtol=1e-9, atol=0.0):
        raise ValidationError("t must be strictly increasing and evenly spaced")
    return dt


def parse_mortality_csv(text: str, name: str = "table") -> MortalityTable:
    """
    Build a table from CSV text with header `t,p`; `#` lines are comments.

    Raises:
        ParseError: On a malformed row (names the line).
        ValidationError: On negative mass or an uneven grid.
    """
    times, masses = _parse_rows(text, name)
    dt = _infer_dt(times)
    return MortalityTable(p=np.asarray(masses), dt=dt, name=name)


def load_mortality_csv(path: Path) -> MortalityTable:
    """
    Load a mortality table from a CSV file, renormalising the mass to one.

    Args:
        path: CSV file with header `t,p`.

    Returns:
        MortalityTable with dt inferred from the grid spacing.

    Raises:
        FileNotFoundError: If the file does not exist.
        ParseError: On a malformed row.
        ValidationError: On negative mass or an uneven grid.
    """
    text = path.read_text(encoding="utf-8")
    return parse_mortality_csv(text, name=path.stem)


def load_bundled_table(name: str = DEFAULT_TABLE) -> MortalityTable:
    """
    Load a table shipped with the package.

    Raises:
        ConfigurationError: If no bundled table has that name.
    """
    resource = resources.files(_DATA_PACKAGE).joinpath(f"{name}.csv")
    if not resource.is_file():
        raise ConfigurationError(f"no bundled mortality table named {name!r}")
    return parse_mortality_csv(resource.read_text(encoding="utf-8"), name=name)
