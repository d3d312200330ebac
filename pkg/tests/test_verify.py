"""Tests for the verification suites."""

import pytest

from src.calculus import get_calculus
from src.errors import InputError
from src.report import Report
from src.verify import (
    SUITES,
    engine_pool,
    run_suite,
    verify_atom_family,
    verify_b_prime,
    verify_closure,
    verify_engine,
    verify_lemmas,
    verify_partial_isometries,
    verify_relations,
    verify_toeplitz,
    verify_word_orthogonality,
)

DESK = ["full2", "golden", "even", "onepoint"]


def _assert_passed(report: Report) -> None:
    assert report.passed, report.counterexamples[:3]
    assert report.checks
    assert all(check.instances > 0 for check in report.checks)


class TestSuites:
    """Each suite passes on the desk shifts at depth 3."""

    @pytest.mark.parametrize("name", DESK)
    def test_relations(self, desk_shifts, name):
        _assert_passed(verify_relations(desk_shifts[name], 3))

    @pytest.mark.parametrize("name", DESK)
    def test_lemmas(self, desk_shifts, name):
        _assert_passed(verify_lemmas(desk_shifts[name], 3))

    @pytest.mark.parametrize("name", DESK)
    def test_b_prime(self, desk_shifts, name):
        _assert_passed(verify_b_prime(desk_shifts[name], 3))

    @pytest.mark.parametrize("name", DESK)
    def test_closure(self, desk_shifts, name):
        _assert_passed(verify_closure(desk_shifts[name], 3))

    @pytest.mark.parametrize("name", DESK)
    def test_toeplitz(self, desk_shifts, name):
        _assert_passed(verify_toeplitz(desk_shifts[name], 3))

    @pytest.mark.parametrize("name", DESK)
    def test_engine(self, desk_shifts, name):
        _assert_passed(verify_engine(desk_shifts[name], 3))

    def test_golden_partial_isometries_to_depth_four(self, golden):
        _assert_passed(verify_partial_isometries(golden, 4))
        _assert_passed(verify_word_orthogonality(golden, 4))
        _assert_passed(verify_atom_family(golden, 4))

    def test_relations_note_the_source_projection_reading(self, golden):
        report = verify_relations(golden, 2)
        assert any("sigma" in note or "σ" in note for note in report.notes)


class TestOnePoint:
    """A single generator is a unitary."""

    def test_single_generator_checks_are_run(self, onepoint):
        report = verify_relations(onepoint, 3)
        names = {check.name for check in report.checks}
        assert "one generator: S* S = I" in names
        assert "one generator: words reduce to S^n, S*^n or I" in names
        _assert_passed(report)

    def test_multi_letter_shifts_skip_single_generator_checks(self, golden):
        names = {check.name for check in verify_relations(golden, 2).checks}
        assert not any(name.startswith("one generator") for name in names)

    def test_all_suites_at_depth_five(self, onepoint):
        _assert_passed(run_suite(onepoint, "all", 5))


class TestRunSuite:
    """Dispatch and argument checks."""

    def test_all_merges_every_suite(self, full2):
        report = run_suite(full2, "all", 2)
        assert report.suite == "all"
        merged = {check.name for check in report.checks}
        for name, check in SUITES.items():
            assert {c.name for c in check(full2, 2).checks} <= merged
        _assert_passed(report)

    def test_named_suite(self, golden):
        assert run_suite(golden, "bprime", 2).suite == "bprime"

    def test_unknown_suite(self, golden):
        with pytest.raises(InputError, match="unknown suite"):
            run_suite(golden, "nonsense", 2)

    def test_depth_must_be_positive(self, golden):
        with pytest.raises(InputError, match="at least 1"):
            verify_relations(golden, 0)


class TestReport:
    """Counterexample bookkeeping."""

    def test_failures_are_recorded_not_raised(self):
        report = Report(suite="demo", shift="x", depth=1)
        report.record("identity", True)
        report.record("identity", False, "w=0", "lhs", "rhs")
        assert not report.passed
        assert report.checks[0].instances == 2
        assert report.checks[0].failures == 1
        assert report.counterexamples[0].instance == "w=0"

    def test_counterexamples_are_capped(self):
        report = Report(suite="demo", shift="x", depth=1)
        for n in range(Report.max_counterexamples + 5):
            report.record("identity", False, str(n))
        assert len(report.counterexamples) == Report.max_counterexamples
        assert report.checks[0].failures == Report.max_counterexamples + 5

    def test_merge_sums_instances(self):
        first = Report(suite="a", shift="x", depth=1)
        first.record("identity", True)
        second = Report(suite="b", shift="x", depth=1)
        second.record("identity", False, "w")
        second.notes.append("note")
        first.merge(second)
        assert first.checks[0].instances == 2
        assert not first.passed
        assert first.notes == ["note"]

    def test_json_carries_passed_flag(self):
        report = Report(suite="demo", shift="x", depth=1)
        report.record("identity", True)
        assert '"passed":true' in report.model_dump_json().replace(" ", "")


class TestEnginePool:
    """Sample pool of the engine suite."""

    def test_pool_is_reproducible(self, golden):
        calc = get_calculus(golden)
        assert engine_pool(calc, 3) == engine_pool(calc, 3)

    def test_drawn_elements_follow_the_fixed_ones(self, golden, monkeypatch):
        calc = get_calculus(golden)
        monkeypatch.setattr("src.verify.settings.engine_samples", 0)
        fixed = engine_pool(calc, 3)
        monkeypatch.setattr("src.verify.settings.engine_samples", 3)
        pool = engine_pool(calc, 3)
        assert len(fixed) == 6
        assert len(pool) == 9
        assert pool[:6] == fixed

    def test_seed_changes_the_draw(self, golden, monkeypatch):
        calc = get_calculus(golden)
        drawn = set()
        for seed in range(5):
            monkeypatch.setattr("src.verify.settings.engine_seed", seed)
            drawn.add(tuple(str(x) for x in engine_pool(calc, 3)[6:]))
        assert len(drawn) > 1

    @pytest.mark.parametrize("name", ["golden", "even"])
    def test_engine_passes_with_another_seed(self, desk_shifts, name, monkeypatch):
        monkeypatch.setattr("src.verify.settings.engine_seed", 7)
        _assert_passed(verify_engine(desk_shifts[name], 3))
