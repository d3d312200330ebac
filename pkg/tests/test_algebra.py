"""Tests for snapshot levels, atoms and the tower data."""

import pytest

from src.algebra import AlgebraElement, BasicSet, LevelIndex, SetAlgebra, get_algebra, k0_presentation
from src.errors import AtomLimitError, InputError, LevelError, NotIndicatorError
from src.parser import load_shift
from src.shift import SftWindow
from tests.conftest import shift_path
from tests.oracle import Oracle, atom_pairs, class_sets


@pytest.fixture(scope="module")
def oracle_extensions(desk_shifts):
    return {name: Oracle(shift).window_extensions(4) for name, shift in desk_shifts.items()}


class TestLevelIndex:
    """Levels, joins and refinement."""

    def test_join(self):
        assert LevelIndex(1, 1).join(LevelIndex(0, 2)) == LevelIndex(1, 3)
        assert LevelIndex(2, 2).join(LevelIndex(0, 0)) == LevelIndex(2, 2)

    def test_refines(self):
        assert LevelIndex(1, 3).refines(LevelIndex(0, 2))
        assert not LevelIndex(1, 1).refines(LevelIndex(0, 2))

    def test_negative_rejected(self):
        with pytest.raises(InputError):
            LevelIndex(-1, 0)

    def test_str(self):
        assert str(LevelIndex(2, 3)) == "(2,3)"


class TestTailClasses:
    """m(l) and the atoms against the brute-force oracle."""

    def test_golden_mean(self, golden):
        assert [get_algebra(golden).m(l) for l in range(5)] == [1, 2, 2, 2, 2]

    def test_full_shift(self, full2):
        assert [get_algebra(full2).m(l) for l in range(5)] == [1, 1, 1, 1, 1]

    def test_even_shift_stabilizes_at_three(self, even):
        assert [get_algebra(even).m(l) for l in range(5)] == [1, 2, 3, 3, 3]

    def test_one_point(self, onepoint):
        algebra = get_algebra(onepoint)
        assert [algebra.m(l) for l in range(4)] == [1, 1, 1, 1]
        assert all(len(algebra.atoms(LevelIndex(j, j))) == 1 for j in range(4))

    def test_golden2block(self, golden2block):
        assert get_algebra(golden2block).m(1) == 2

    @pytest.mark.parametrize("name", ["full2", "golden", "even", "onepoint"])
    def test_classes_match_oracle(self, desk_shifts, oracle_extensions, name):
        algebra = get_algebra(desk_shifts[name])
        for l in range(5):
            ours = {c.extensions for c in algebra.classes(l)}
            assert ours == class_sets(oracle_extensions[name], l)

    @pytest.mark.parametrize("name", ["full2", "golden", "even", "onepoint"])
    def test_atoms_match_oracle(self, desk_shifts, oracle_extensions, name):
        algebra = get_algebra(desk_shifts[name])
        for l in range(4):
            for k in range(l + 1):
                level = LevelIndex(k, l)
                ours = {(atom.nu, algebra.atom_extensions(atom, level)) for atom in algebra.atoms(level)}
                assert ours == atom_pairs(oracle_extensions[name], k, l), level

    def test_golden_atom_counts(self, golden):
        algebra = get_algebra(golden)
        assert len(algebra.atoms(LevelIndex(1, 1))) == 3
        assert [len(algebra.atoms(LevelIndex(j, j))) for j in range(4)] == [1, 3, 5, 8]

    def test_full_shift_diagonal(self, full2):
        algebra = get_algebra(full2)
        assert [len(algebra.atoms(LevelIndex(j, j))) for j in range(4)] == [1, 2, 4, 8]

    def test_atom_limit(self, monkeypatch):
        monkeypatch.setattr("src.algebra.settings.max_atoms", 2)
        shift = load_shift(shift_path("golden"))
        with pytest.raises(AtomLimitError, match="SUBSHIFT_MAX_ATOMS"):
            SetAlgebra(shift).atoms(LevelIndex(1, 1))

    def test_class_polynomial(self, golden):
        assert get_algebra(golden).class_polynomial(1, 1) == [((), True), ((0,), True), ((1,), False)]

    def test_describe_atom(self, golden):
        algebra = get_algebra(golden)
        assert [algebra.describe_atom(a) for a in algebra.atoms(LevelIndex(1, 1))] == ["0:0", "0:1", "1:0"]


class TestElements:
    """Arithmetic on algebra elements."""

    def test_cylinders_partition_unit(self, golden):
        algebra = get_algebra(golden)
        assert algebra.cylinder((0,)) + algebra.cylinder((1,)) == algebra.unit()
        assert algebra.unit() == 1

    def test_cylinders_are_orthogonal_projections(self, golden):
        algebra = get_algebra(golden)
        c0, c1 = algebra.cylinder((0,)), algebra.cylinder((1,))
        assert (c0 * c1).is_zero()
        assert c1 * c1 == c1
        assert c1.adjoint() == c1

    def test_shifted_cylinder_is_a_class_indicator(self, golden):
        algebra = get_algebra(golden)
        assert algebra.shifted_cylinder((1,)) == algebra.class_indicator(0, 1)
        assert algebra.shifted_cylinder((0,)) == algebra.unit()

    def test_embed_basic_level_error_suggests_level(self, golden):
        algebra = get_algebra(golden)
        with pytest.raises(LevelError) as exc:
            algebra.embed_basic(BasicSet((0,), (0,)), LevelIndex(0, 0))
        assert exc.value.suggested == LevelIndex(1, 1)

    def test_cannot_move_to_coarser_level(self, golden):
        algebra = get_algebra(golden)
        with pytest.raises(LevelError):
            algebra.cylinder((0,)).at(LevelIndex(0, 0))

    def test_iota_k(self, golden):
        algebra = get_algebra(golden)
        f = algebra.cylinder((1,))
        up = algebra.iota_k(f)
        assert up.level == LevelIndex(2, 1)
        assert up == f

    def test_refine_a_requires_k_zero(self, golden):
        algebra = get_algebra(golden)
        with pytest.raises(LevelError):
            algebra.refine_A(algebra.cylinder((1,)))
        assert algebra.refine_A(algebra.unit()).level == LevelIndex(0, 1)

    def test_evaluate(self, golden):
        algebra = get_algebra(golden)
        f = algebra.cylinder((1,))
        assert algebra.evaluate(f, (1, 0), SftWindow((0,))) == 1
        assert algebra.evaluate(f, (0,), SftWindow((1,))) == 0

    def test_evaluate_rejects_illegal_descriptor(self, golden):
        algebra = get_algebra(golden)
        with pytest.raises(InputError):
            algebra.evaluate(algebra.cylinder((1,)), (1,), SftWindow((1,)))

    def test_scalar_arithmetic(self, golden):
        algebra = get_algebra(golden)
        f = algebra.cylinder((1,)) * 3 - 1
        assert algebra.evaluate(f, (1, 0), SftWindow((0,))) == 2
        assert algebra.evaluate(f, (0, 0), SftWindow((0,))) == -1
        assert not f.is_indicator()
        with pytest.raises(NotIndicatorError):
            f.require_indicator()

    def test_str_lists_atoms(self, golden):
        algebra = get_algebra(golden)
        assert str(algebra.shifted_cylinder((1,))) == "1*[ε:0]@(0,1)"
        assert str(algebra.zero()) == "0@(0,0)"

    def test_different_shifts_do_not_mix(self, golden, full2):
        from src.errors import ShiftMismatchError

        with pytest.raises(ShiftMismatchError):
            get_algebra(golden).unit() + get_algebra(full2).unit()

    def test_element_is_unhashable(self, golden):
        with pytest.raises(TypeError):
            hash(get_algebra(golden).unit())
        assert isinstance(get_algebra(golden).unit(), AlgebraElement)


class TestTowers:
    """Bratteli diagrams and K0 presentations."""

    def test_golden_a_tower(self, golden):
        diagram = get_algebra(golden).bratteli("A", 5)
        assert diagram.sizes == [1, 2, 2, 2, 2, 2]
        assert diagram.incidence[0] == [[1], [1]]
        assert diagram.stable
        assert diagram.stable_from == 1
        assert diagram.stable_matrix == [[1, 0], [0, 1]]

    def test_golden_k0(self, golden):
        k0 = k0_presentation(get_algebra(golden).bratteli("A", 4))
        assert k0.stationary
        assert k0.group == "Z^2"
        assert k0.determinant == 1
        assert k0.invariant_factors == [1, 1]

    def test_one_point_k0(self, onepoint):
        k0 = k0_presentation(get_algebra(onepoint).bratteli("A", 3))
        assert k0.group == "Z"
        assert k0.order_unit == [1]

    def test_full_shift_diagonal_is_not_stationary(self, full2):
        diagram = get_algebra(full2).bratteli("diagonal", 3)
        assert diagram.sizes == [1, 2, 4, 8]
        assert not diagram.stable
        k0 = k0_presentation(diagram)
        assert k0.truncated
        assert k0.order_unit == [1] * 8

    def test_even_a_tower(self, even):
        diagram = get_algebra(even).bratteli("A", 4)
        assert diagram.sizes == [1, 2, 3, 3, 3]
        assert diagram.stable_from == 2

    def test_unknown_tower(self, golden):
        with pytest.raises(InputError):
            get_algebra(golden).bratteli("B", 3)

    def test_diagram_round_trips_through_json(self, golden):
        from src.report import BratteliDiagram

        diagram = get_algebra(golden).bratteli("diagonal", 3)
        assert BratteliDiagram.model_validate_json(diagram.model_dump_json()) == diagram
