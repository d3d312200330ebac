"""Tests for block codes, conjugacy certificates and the induced maps."""

import logging

import pytest

from src.algebra import BasicSet, get_algebra
from src.calculus import get_calculus
from src.conjugacy import (
    BlockCode,
    ConjugacyCertificate,
    check_generator_images,
    compare_invariants,
    corr_map_S,
    corr_map_T,
    identity_code,
    induced_generator_images,
    pullback_basic,
    pullback_Psi,
    verify_block_code,
    verify_conjugacy,
    verify_corr_isomorphism,
)
from src.correspondence import basis_elements, generator_sets, xi
from src.errors import InputError, ShiftMismatchError, VerificationError


@pytest.fixture(scope="module")
def golden_cert(golden_codes):
    forward, inverse = golden_codes
    return verify_conjugacy(forward, inverse, 4)


class TestBlockCode:
    """Construction, validation and application."""

    def test_apply_two_block_code(self, golden_codes):
        forward, _ = golden_codes
        assert forward.apply((0, 1, 0, 0)) == (1, 2, 0)
        assert forward.apply((0,)) == ()

    def test_preimages(self, golden_codes):
        forward, inverse = golden_codes
        assert forward.preimages((1,)) == [(0, 1)]
        assert sorted(inverse.preimages((0,))) == [(0,), (1,)]

    def test_missing_entry(self, golden, golden2block):
        with pytest.raises(InputError, match="has no entry for 10"):
            BlockCode(source=golden, target=golden2block, window=2, table={(0, 0): 0, (0, 1): 1})

    def test_entry_of_wrong_length(self, golden, golden2block):
        with pytest.raises(InputError, match="expected 2"):
            BlockCode(source=golden, target=golden2block, window=2, table={(0,): 0})

    def test_from_text_reports_line_of_unknown_symbol(self, golden, golden2block):
        text = "window: 2\n00 -> a\n01 -> z\n10 -> c\n"
        with pytest.raises(InputError) as exc:
            BlockCode.from_text(text, golden, golden2block)
        assert exc.value.line == 3

    def test_from_text_ignores_words_outside_the_language(self, golden, golden2block, caplog):
        text = "window: 2\n00 -> a\n01 -> b\n10 -> c\n11 -> a\n"
        with caplog.at_level(logging.WARNING):
            code = BlockCode.from_text(text, golden, golden2block)
        assert (1, 1) not in code.table
        assert "not in the language" in caplog.text

    def test_identity_code(self, even):
        code = identity_code(even)
        assert code.apply((0, 1, 1)) == (0, 1, 1)

    def test_verify_block_code_passes(self, golden_codes):
        forward, inverse = golden_codes
        assert verify_block_code(forward, 4).passed
        assert verify_block_code(inverse, 4).passed

    def test_verify_block_code_finds_illegal_image(self, full2, golden):
        code = BlockCode(source=full2, target=golden, window=1, table={(0,): 0, (1,): 1})
        report = verify_block_code(code, 2)
        assert not report.passed
        assert any(example.lhs == "11" for example in report.counterexamples)


class TestVerifyConjugacy:
    """Certificates are only issued for mutually inverse codes."""

    def test_golden_to_two_block(self, golden_cert, golden, golden2block):
        assert golden_cert.source is golden
        assert golden_cert.target is golden2block
        assert golden_cert.summary()["forward_window"] == 2

    def test_identity_certificate(self, even):
        code = identity_code(even)
        cert = verify_conjugacy(code, code, 3)
        assert cert.depth == 3

    def test_non_injective_code_has_witness_pair(self, full2, onepoint):
        collapse = BlockCode(source=full2, target=onepoint, window=1, table={(0,): 0, (1,): 0})
        back = BlockCode(source=onepoint, target=full2, window=1, table={(0,): 0})
        with pytest.raises(VerificationError) as exc:
            verify_conjugacy(collapse, back, 3)
        assert exc.value.witness["pair"] == ["1", "0"]
        assert exc.value.witness["common_image"] == "a"

    def test_illegal_image_is_reported(self, full2, golden):
        forward = BlockCode(source=full2, target=golden, window=1, table={(0,): 0, (1,): 1})
        backward = BlockCode(source=golden, target=full2, window=1, table={(0,): 0, (1,): 1})
        with pytest.raises(VerificationError) as exc:
            verify_conjugacy(forward, backward, 3)
        assert exc.value.witness["image"] == "11"

    def test_directions_must_match(self, golden_codes):
        forward, _ = golden_codes
        with pytest.raises(ShiftMismatchError):
            verify_conjugacy(forward, forward, 3)

    def test_depth_must_be_positive(self, golden_codes):
        forward, inverse = golden_codes
        with pytest.raises(InputError):
            verify_conjugacy(forward, inverse, 0)


class TestPullback:
    """Ψ computed on cylinders and atoms."""

    def test_cylinder_pulls_back_to_its_block(self, golden_cert, golden, golden2block):
        target = get_algebra(golden2block)
        source = get_algebra(golden)
        assert pullback_Psi(golden_cert, target.cylinder((1,))) == source.cylinder((0, 1))

    def test_unit_pulls_back_to_unit(self, golden_cert, golden, golden2block):
        assert pullback_Psi(golden_cert, get_algebra(golden2block).unit()) == get_algebra(golden).unit()

    def test_basic_sets_agree_with_atoms(self, golden_cert, golden2block):
        target = get_algebra(golden2block)
        for b in generator_sets(golden2block, 3):
            assert pullback_basic(golden_cert, b) == pullback_Psi(golden_cert, target.embed_basic(b))

    def test_round_trip(self, golden_cert, golden2block):
        target = get_algebra(golden2block)
        f = target.embed_basic(BasicSet((2,), (0,)))
        back = golden_cert.inverse_pullback()(pullback_Psi(golden_cert, f))
        assert back == f

    def test_foreign_element_is_rejected(self, golden_cert, golden):
        with pytest.raises(ShiftMismatchError):
            pullback_Psi(golden_cert, get_algebra(golden).unit())


class TestCorrespondenceMaps:
    """T and S are mutually inverse and isometric."""

    def test_s_after_t_is_identity(self, golden_cert, golden2block):
        for v in basis_elements(golden2block, generator_sets(golden2block, 2)):
            assert corr_map_S(golden_cert, corr_map_T(golden_cert, v)) == v

    def test_t_after_s_is_identity(self, golden_cert, golden):
        for w in basis_elements(golden, generator_sets(golden, 2)):
            assert corr_map_T(golden_cert, corr_map_S(golden_cert, w)) == w

    def test_identity_code_fixes_basis(self, even):
        code = identity_code(even)
        cert = ConjugacyCertificate(forward=code, inverse=code, depth=2)
        for a in even.alphabet:
            assert corr_map_T(cert, xi(even, a)) == xi(even, a)

    def test_verify_corr_isomorphism(self, golden_cert):
        report = verify_corr_isomorphism(golden_cert, 3)
        assert report.passed, report.counterexamples[:3]

    def test_mutated_code_fails(self, golden, golden2block, golden_codes):
        _, inverse = golden_codes
        mutated = BlockCode(source=golden, target=golden2block, window=2, table={(0, 0): 0, (0, 1): 2, (1, 0): 1})
        cert = ConjugacyCertificate(forward=mutated, inverse=inverse, depth=3)
        report = verify_corr_isomorphism(cert, 3)
        assert not report.passed
        assert any(example.check == "Psi^-1 Psi = id" for example in report.counterexamples)


class TestGeneratorImages:
    """ρ(S_a) built from T(ξ_a)."""

    def test_images_are_single_monomials(self, golden_cert):
        images = induced_generator_images(golden_cert)
        assert set(images[0].terms) == {((0,), ())}
        assert set(images[1].terms) == {((0,), ())}
        assert set(images[2].terms) == {((1,), ())}

    def test_images_satisfy_relations(self, golden_cert):
        report = check_generator_images(golden_cert, 3)
        assert report.passed, report.counterexamples[:3]

    def test_identity_images_are_generators(self, golden):
        code = identity_code(golden)
        cert = ConjugacyCertificate(forward=code, inverse=code, depth=2)
        calc = get_calculus(golden)
        images = induced_generator_images(cert)
        for a in golden.alphabet:
            assert images[a] == calc.s((a,))


class TestCompareInvariants:
    """Invariant comparison with and without a certificate."""

    def test_different_m_sequences(self, golden, full2):
        result = compare_invariants(golden, full2, 3)
        assert not result.m_equal
        assert result.level_lag is None
        assert result.certificate is None
        assert any("do not prove" in note for note in result.notes)

    def test_certified_pair(self, golden, golden2block, golden_cert):
        result = compare_invariants(golden, golden2block, 3, golden_cert)
        assert result.m_equal
        assert result.level_lag == 0
        assert result.certificate["correspondence_isomorphism"]
        assert result.certificate["generator_images"]

    def test_certificate_must_match_shifts(self, golden, even, golden_cert):
        with pytest.raises(ShiftMismatchError):
            compare_invariants(golden, even, 2, golden_cert)

    def test_k0_of_golden(self, golden, full2):
        result = compare_invariants(golden, full2, 5)
        assert result.source.k0.group == "Z^2"
