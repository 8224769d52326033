"""Tests for mortality CSV ingestion."""

from pathlib import Path

import pytest

from collective_fund.errors import ConfigurationError, ParseError, ValidationError
from collective_fund.mortality.io import (
    load_bundled_table,
    load_mortality_csv,
    parse_mortality_csv,
)


class TestParseMortalityCsv:
    """Test parsing of `t,p` text."""

    def test_two_rows(self) -> None:
        """Rows (0, 0.4), (1, 0.6) give dt = 1."""
        table = parse_mortality_csv("t,p\n0,0.4\n1,0.6\n")
        assert table.dt == 1.0
        assert table.n_steps == 2

    def test_comment_lines_skipped(self) -> None:
        """`#` lines and blanks are ignored."""
        table = parse_mortality_csv("# source\n\nt,p\n# mid\n0,0.5\n0.5,0.5\n")
        assert table.dt == 0.5

    def test_missing_header(self) -> None:
        """A first data row in place of the header is a parse error."""
        with pytest.raises(ParseError) as exc_info:
            parse_mortality_csv("0,0.4\n1,0.6\n")
        assert exc_info.value.line == 1

    def test_bad_row_names_line(self) -> None:
        """A non-numeric value reports its line number."""
        with pytest.raises(ParseError) as exc_info:
            parse_mortality_csv("t,p\n0,0.4\n1,abc\n")
        assert exc_info.value.line == 3

    def test_wrong_field_count(self) -> None:
        """Rows need exactly two fields."""
        with pytest.raises(ParseError):
            parse_mortality_csv("t,p\n0,0.4,1\n")

    def test_negative_mass(self) -> None:
        """Negative mass is a validation error."""
        with pytest.raises(ValidationError):
            parse_mortality_csv("t,p\n0,0.4\n1,-0.6\n")

    def test_uneven_grid(self) -> None:
        """Grid times must be evenly spaced."""
        with pytest.raises(ValidationError):
            parse_mortality_csv("t,p\n0,0.4\n1,0.3\n3,0.3\n")


class TestLoading:
    """Test file and bundled loading."""

    def test_load_from_file(self, tmp_path: Path) -> None:
        """Files load with their stem as the table name."""
        path = tmp_path / "mine.csv"
        path.write_text("t,p\n0,0.2\n1,0.2\n2,0.2\n", encoding="utf-8")
        table = load_mortality_csv(path)
        assert table.name == "mine"
        assert table.p.sum() == pytest.approx(1.0)

    def test_missing_file(self, tmp_path: Path) -> None:
        """A missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_mortality_csv(tmp_path / "absent.csv")

    def test_bundled_table(self) -> None:
        """The bundled table starts at S = 1 with E[tau] between 20 and 30 years."""
        table = load_bundled_table()
        assert table.survival_curve[0] == 1.0
        assert 20.0 <= table.expected_death_time() <= 30.0

    def test_unknown_bundled_table(self) -> None:
        """Unknown names are a configuration error."""
        with pytest.raises(ConfigurationError):
            load_bundled_table("no_such_table")
