"""Tests for presentations, languages and tail types."""

import pytest

from src.errors import InputError
from src.shift import (
    Alphabet,
    ForbiddenWords,
    Indeterminate,
    LabeledGraph,
    SftWindow,
    SoficStateSet,
    VertexShift,
    shortlex,
)
from tests.oracle import Oracle


class TestAlphabet:
    """Symbol tables and word parsing."""

    def test_parse_and_format_single_char_tokens(self):
        alphabet = Alphabet(["0", "1"])
        assert alphabet.parse_word("0110") == (0, 1, 1, 0)
        assert alphabet.format_word((1, 0)) == "10"

    def test_empty_word(self):
        alphabet = Alphabet(["0", "1"])
        assert alphabet.parse_word("") == ()
        assert alphabet.parse_word("ε") == ()
        assert alphabet.format_word(()) == "ε"

    def test_multi_char_tokens_use_separator(self):
        alphabet = Alphabet(["ab", "a", "b"])
        assert alphabet.parse_word("aba") == (0, 1)
        assert alphabet.format_word((0, 1)) == "ab.a"

    def test_foreign_symbol_rejected(self):
        with pytest.raises(InputError, match="foreign symbol"):
            Alphabet(["0", "1"]).parse_word("012")

    def test_duplicate_symbol_rejected(self):
        with pytest.raises(InputError, match="duplicate"):
            Alphabet(["0", "0"])

    def test_check_word_rejects_out_of_range_ids(self):
        with pytest.raises(InputError):
            Alphabet(["0"]).check_word((1,))


class TestLanguage:
    """Language enumeration on the desk shifts."""

    def test_golden_mean_counts_are_fibonacci(self, golden):
        assert [len(golden.enumerate_language(k)) for k in range(6)] == [1, 2, 3, 5, 8, 13]

    def test_golden_mean_words(self, golden):
        assert golden.enumerate_language(2) == ((0, 0), (0, 1), (1, 0))

    def test_full_shift(self, full2):
        assert len(full2.enumerate_language(5)) == 32

    def test_one_point(self, onepoint):
        assert onepoint.enumerate_language(3) == ((0, 0, 0),)

    def test_even_shift_excludes_odd_zero_blocks(self, even):
        assert not even.is_in_language((1, 0, 1))
        assert even.is_in_language((1, 0, 0, 1))
        assert even.is_in_language((0, 1))

    def test_negative_length_rejected(self, golden):
        with pytest.raises(InputError):
            golden.enumerate_language(-1)

    @pytest.mark.parametrize("name", ["full2", "golden", "even", "onepoint"])
    def test_language_matches_oracle(self, desk_shifts, name):
        shift = desk_shifts[name]
        oracle = Oracle(shift)
        for k in range(8):
            assert list(shift.enumerate_language(k)) == oracle.language(k)

    def test_language_up_to_is_shortlex(self, golden):
        words = golden.language_up_to(3)
        assert list(words) == sorted(words, key=shortlex)


class TestTailTypes:
    """Realizable tail types and left extensions."""

    def test_golden_mean_types(self, golden):
        assert golden.realizable_tail_types() == (SftWindow((0,)), SftWindow((1,)))

    def test_golden_mean_left_extensions(self, golden):
        assert golden.left_extensions(SftWindow((1,)), 1) == ((), (0,))
        assert golden.left_extensions(SftWindow((0,)), 1) == ((), (0,), (1,))

    def test_even_shift_has_three_types(self, even):
        types = even.realizable_tail_types()
        assert len(types) == 3
        assert all(isinstance(t, SoficStateSet) for t in types)

    def test_one_point_has_one_type(self, onepoint):
        assert len(onepoint.realizable_tail_types()) == 1

    def test_prepend_rejects_forbidden_words(self, golden):
        assert golden.prepend(SftWindow((1,)), (1,)) is None
        assert golden.prepend(SftWindow((1,)), (0,)) == SftWindow((0,))

    def test_window_determines_type_on_sft(self, golden):
        assert golden.tail_type_of_window((0, 1)) == SftWindow((0,))

    def test_sft_window_is_the_leading_symbols(self, golden):
        # the first M symbols of the word, never its last ones
        assert golden.tail_type_of_window((1, 0)) == SftWindow((1,))
        assert golden.tail_type_of_window((0, 1)) != SftWindow((1,))

    def test_even_window_of_zeros_is_indeterminate(self, even):
        result = even.tail_type_of_window((0, 0))
        assert isinstance(result, Indeterminate)
        assert len(result.candidates) == 3
        assert result.current is not None

    def test_even_window_with_one_is_determined(self, even):
        result = even.tail_type_of_window((1,))
        assert isinstance(result, SoficStateSet)

    def test_window_outside_language_rejected(self, golden):
        with pytest.raises(InputError, match="not in the language"):
            golden.tail_type_of_window((1, 1))


class TestPresentations:
    """Construction of the three presentation kinds."""

    def test_empty_shift_rejected(self):
        with pytest.raises(InputError, match="no points"):
            ForbiddenWords("empty", Alphabet(["0", "1"]), [(0,), (1,)])

    def test_vertex_shift_is_trimmed(self):
        # symbol 2 can be entered but never left
        shift = VertexShift("trim", Alphabet(["0", "1", "2"]), [[1, 1, 1], [1, 0, 0], [0, 0, 0]])
        assert shift.essential_symbols == (0, 1)
        assert not shift.is_in_language((2,))

    def test_vertex_shift_matches_forbidden_words(self, golden2block):
        assert golden2block.is_in_language((0, 1, 2))
        assert not golden2block.is_in_language((1, 0))

    def test_vertex_shift_matrix_must_be_square(self):
        with pytest.raises(InputError, match="must be 2x2"):
            VertexShift("bad", Alphabet(["0", "1"]), [[1, 1]])

    def test_labeled_graph_trims_stranded_states(self):
        shift = LabeledGraph("g", Alphabet(["0", "1"]), ["A", "B"], [("A", 0, "A"), ("A", 1, "B")])
        assert shift.states == ("A",)
        assert shift.enumerate_language(2) == ((0, 0),)

    def test_relation_monoid_limit(self, monkeypatch):
        from src.errors import AtomLimitError

        monkeypatch.setattr("src.shift.settings.max_relations", 1)
        shift = LabeledGraph("g", Alphabet(["0", "1"]), ["A", "B"], [("A", 1, "A"), ("A", 0, "B"), ("B", 0, "A")])
        with pytest.raises(AtomLimitError):
            shift.realizable_tail_types()

    def test_shifts_compare_by_identity(self):
        a = ForbiddenWords("x", Alphabet(["0", "1"]), [(1, 1)])
        b = ForbiddenWords("x", Alphabet(["0", "1"]), [(1, 1)])
        assert a != b
        assert a == a
