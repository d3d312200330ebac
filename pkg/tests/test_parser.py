"""Tests for shift-definition and block-code parsing."""

import pytest

from src.errors import InputError
from src.parser import load_block_code_text, load_shift, parse_block_code, parse_shift
from src.shift import ForbiddenWords, LabeledGraph, VertexShift
from tests.conftest import shift_path


class TestParseShift:
    """Shift definition files."""

    def test_forbidden_inline(self):
        shift = parse_shift("name: g\nalphabet: 0 1\nforbidden: 11\n")
        assert isinstance(shift, ForbiddenWords)
        assert shift.name == "g"
        assert shift.forbidden == ((1, 1),)

    def test_forbidden_on_following_lines(self):
        shift = parse_shift("alphabet: 0 1\nforbidden:\n11\n101  # comment\n")
        assert shift.forbidden == ((1, 1), (1, 0, 1))

    def test_matrix_rows_with_and_without_spaces(self):
        shift = parse_shift("alphabet: a b\nmatrix:\n1 1\n10\n")
        assert isinstance(shift, VertexShift)
        assert shift.matrix == ((1, 1), (1, 0))

    def test_graph_edges(self):
        shift = parse_shift("alphabet: 0 1\ngraph:\nA -1-> A\nA -0-> B\nB -0-> A\n")
        assert isinstance(shift, LabeledGraph)
        assert shift.states == ("A", "B")

    def test_default_name(self):
        assert parse_shift("alphabet: 0\nforbidden:\n", name="fallback").name == "fallback"

    def test_foreign_symbol_reports_line(self):
        with pytest.raises(InputError) as exc:
            parse_shift("alphabet: 0 1\nforbidden:\n11\n12\n")
        assert exc.value.line == 4
        assert str(exc.value).startswith("line 4:")

    def test_duplicate_forbidden_word(self):
        with pytest.raises(InputError, match="duplicate forbidden word") as exc:
            parse_shift("alphabet: 0 1\nforbidden: 11 11\n")
        assert exc.value.line == 2

    def test_missing_alphabet(self):
        with pytest.raises(InputError, match="before 'alphabet:'"):
            parse_shift("forbidden: 11\n")

    def test_missing_presentation(self):
        with pytest.raises(InputError, match="missing presentation"):
            parse_shift("alphabet: 0 1\n")

    def test_second_section_rejected(self):
        with pytest.raises(InputError, match="second presentation section") as exc:
            parse_shift("alphabet: 0 1\nforbidden: 11\nmatrix:\n11\n11\n")
        assert exc.value.line == 3

    def test_matrix_row_length(self):
        with pytest.raises(InputError, match="expected 2") as exc:
            parse_shift("alphabet: 0 1\nmatrix:\n1 1 1\n")
        assert exc.value.line == 3

    def test_bad_edge(self):
        with pytest.raises(InputError, match="must look like") as exc:
            parse_shift("alphabet: 0 1\ngraph:\nA 0 B\n")
        assert exc.value.line == 3

    def test_load_shift_uses_file(self):
        shift = load_shift(shift_path("golden"))
        assert shift.name == "golden"
        assert shift.forbidden == ((1, 1),)

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(InputError, match="not found"):
            load_shift(str(tmp_path / "missing.shift"))

    def test_name_defaults_to_file_stem(self, tmp_path):
        path = tmp_path / "mine.shift"
        path.write_text("alphabet: 0 1\nforbidden: 00\n", encoding="utf-8")
        assert load_shift(str(path)).name == "mine"

    def test_matrix_rows_separated_by_tabs(self):
        shift = parse_shift("alphabet: a b\nmatrix:\n1\t1\n1\t0\n")
        assert shift.matrix == ((1, 1), (1, 0))

    def test_load_file_that_is_not_utf8(self, tmp_path):
        path = tmp_path / "bad.shift"
        path.write_bytes(b"alphabet: 0 1\nforbidden: 1\xff1\n")
        with pytest.raises(InputError, match="not valid UTF-8"):
            load_shift(str(path))


class TestParseBlockCode:
    """Block-code files."""

    def test_table(self):
        window, table, lines = parse_block_code("window: 2\n00 -> a\n01 -> b\n10 -> c\n")
        assert window == 2
        assert table == {"00": "a", "01": "b", "10": "c"}
        assert lines["10"] == 4

    def test_missing_window(self):
        with pytest.raises(InputError, match="missing 'window:'"):
            parse_block_code("00 -> a\n")

    def test_bad_window(self):
        with pytest.raises(InputError, match="not an integer"):
            parse_block_code("window: two\n")

    def test_duplicate_entry(self):
        with pytest.raises(InputError, match="duplicate entry") as exc:
            parse_block_code("window: 1\n0 -> a\n0 -> b\n")
        assert exc.value.line == 3

    def test_malformed_entry(self):
        with pytest.raises(InputError, match="word -> symbol"):
            parse_block_code("window: 1\n0 a\n")

    def test_block_code_file_that_is_not_utf8(self, tmp_path):
        path = tmp_path / "bad.code"
        path.write_bytes(b"window: 1\n0 -> \xe9\n")
        with pytest.raises(InputError, match="not valid UTF-8"):
            load_block_code_text(str(path))
