"""Finite snapshots of the commutative algebras of a subshift.

A level ``(k, l)`` is spanned by the indicators of the atoms
``C(nu) ∩ σ^{-k}(E_i^l)``: a word ``nu`` of length ``k`` followed by a point
whose ``l``-past class is ``i``. Elements are exact coefficient vectors over
those atoms. Every re-expression between levels (refinement, λ̃_a, φ̃) is a
pullback along a point map, tabulated over point descriptors ``(w, t)``: a
word ``w`` followed by any point of tail type ``t``.
"""

import logging
import weakref
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from . import scalars
from .config import settings
from .errors import AtomLimitError, InputError, LevelError, NotIndicatorError, ShiftMismatchError
from .report import BratteliDiagram, K0Presentation
from .scalars import Scalar
from .shift import EMPTY, Subshift, TailType, Word

logger = logging.getLogger(__name__)

Op = Union[str, Tuple[str, int]]


@dataclass(frozen=True, order=True)
class LevelIndex:
    k: int
    l: int

    def __post_init__(self) -> None:
        if self.k < 0 or self.l < 0:
            raise InputError(f"level ({self.k},{self.l}) must have non-negative entries")

    def join(self, other: "LevelIndex") -> "LevelIndex":
        k = max(self.k, other.k)
        return LevelIndex(k, k + max(self.l - self.k, other.l - other.k))

    def refines(self, other: "LevelIndex") -> bool:
        return self.k >= other.k and self.l - self.k >= other.l - other.k

    def __str__(self) -> str:
        return f"({self.k},{self.l})"


A_LEVEL = LevelIndex(0, 0)


@dataclass(frozen=True)
class BasicSet:
    """``C(mu, nu) = {nu x ∈ X : mu x ∈ X}``."""

    mu: Word
    nu: Word

    def min_level(self) -> LevelIndex:
        return LevelIndex(len(self.nu), len(self.mu))


@dataclass(frozen=True)
class Atom:
    nu: Word
    cls: int


@dataclass(frozen=True)
class TailClass:
    """One l-past class: the tail types sharing the same left extensions."""

    index: int
    members: Tuple[TailType, ...]
    extensions: FrozenSet[Word]


class SetAlgebra:
    """Atoms, levels and pullback maps of one subshift."""

    def __init__(self, shift: Subshift) -> None:
        self.shift = shift
        self._classes: Dict[int, Tuple[TailClass, ...]] = {}
        self._class_of: Dict[int, Dict[TailType, int]] = {}
        self._atoms: Dict[LevelIndex, Tuple[Atom, ...]] = {}
        self._atom_index: Dict[LevelIndex, Dict[Atom, int]] = {}
        self._descriptors: Dict[int, Tuple[Tuple[Word, TailType], ...]] = {}
        self._maps: Dict[Tuple[LevelIndex, LevelIndex, Op], Tuple[Optional[int], ...]] = {}
        self._embedded: Dict[Tuple[BasicSet, LevelIndex], "AlgebraElement"] = {}

    # tail classes

    def classes(self, l: int) -> Tuple[TailClass, ...]:
        if l < 0:
            raise InputError("past depth must be non-negative")
        if l not in self._classes:
            groups: Dict[FrozenSet[Word], List[TailType]] = {}
            for t in self.shift.realizable_tail_types():
                groups.setdefault(frozenset(self.shift.left_extensions(t, l)), []).append(t)
            ordered = sorted(groups.items(), key=lambda item: item[1][0].sort_key())
            result = tuple(
                TailClass(index=i, members=tuple(members), extensions=extensions)
                for i, (extensions, members) in enumerate(ordered)
            )
            self._classes[l] = result
            self._class_of[l] = {t: c.index for c in result for t in c.members}
            logger.debug("%s: m(%d) = %d", self.shift.name, l, len(result))
        return self._classes[l]

    atoms_A = classes

    def class_of(self, t: TailType, l: int) -> int:
        self.classes(l)
        return self._class_of[l][t]

    def m(self, l: int) -> int:
        return len(self.classes(l))

    # atoms

    def atoms(self, level: LevelIndex) -> Tuple[Atom, ...]:
        if level not in self._atoms:
            found = set()
            for tail_class in self.classes(level.l):
                for t in tail_class.members:
                    for word in self.shift.exact_extensions(t, level.k):
                        found.add(Atom(word, tail_class.index))
                if len(found) > settings.max_atoms:
                    raise AtomLimitError(
                        f"level {level} of {self.shift.name} has more than {settings.max_atoms} atoms "
                        "(raise SUBSHIFT_MAX_ATOMS to allow it)"
                    )
            atoms = tuple(sorted(found, key=lambda a: (a.nu, a.cls)))
            self._atoms[level] = atoms
            self._atom_index[level] = {a: i for i, a in enumerate(atoms)}
            logger.debug("%s: %d atoms at level %s", self.shift.name, len(atoms), level)
        return self._atoms[level]

    atoms_D = atoms

    def atom_extensions(self, atom: Atom, level: LevelIndex) -> FrozenSet[Word]:
        return self.classes(level.l)[atom.cls].extensions

    def describe_atom(self, atom: Atom) -> str:
        return f"{self.shift.alphabet.format_word(atom.nu)}:{atom.cls}"

    def descriptors(self, n: int) -> Tuple[Tuple[Word, TailType], ...]:
        if n not in self._descriptors:
            self._descriptors[n] = tuple(
                (word, t) for t in self.shift.realizable_tail_types() for word in self.shift.exact_extensions(t, n)
            )
        return self._descriptors[n]

    def atom_of(self, word: Word, t: TailType, level: LevelIndex) -> Optional[int]:
        """Index of the atom containing the points ``word x`` with ``x`` of type ``t``."""
        if len(word) < level.k:
            raise LevelError(f"descriptor of length {len(word)} is too short for level {level}")
        tail = self.shift.prepend(t, word[level.k :])
        if tail is None:
            return None
        self.atoms(level)
        atom = Atom(word[: level.k], self.class_of(tail, level.l))
        return self._atom_index[level].get(atom)

    # pullbacks

    def _image(self, op: Op, word: Word, t: TailType) -> Optional[Tuple[Word, TailType]]:
        if op == "id":
            return word, t
        if op == "shift":
            return word[1:], t
        if isinstance(op, tuple) and op[0] == "lambda":
            extended = (op[1], *word)
            if not self.shift.admits(t, extended):
                return None
            return extended, t
        raise ValueError(f"unknown point map {op!r}")

    def pullback_map(self, target: LevelIndex, source: LevelIndex, op: Op = "id") -> Tuple[Optional[int], ...]:
        """For each atom of ``target``, the atom of ``source`` containing its image under ``op``."""
        key = (target, source, op)
        if key in self._maps:
            return self._maps[key]
        n = max(target.k, source.k + 1)
        mapping: List[Optional[int]] = [None] * len(self.atoms(target))
        seen = [False] * len(mapping)
        for word, t in self.descriptors(n):
            ti = self.atom_of(word, t, target)
            image = self._image(op, word, t)
            si = None if image is None else self.atom_of(image[0], image[1], source)
            if not seen[ti]:
                mapping[ti], seen[ti] = si, True
            elif mapping[ti] != si:
                raise LevelError(
                    f"level {target} is too shallow to carry an element of level {source} through {op!r}",
                    suggested=target.join(source),
                )
        result = tuple(mapping)
        self._maps[key] = result
        return result

    def pullback(self, e: "AlgebraElement", target: LevelIndex, op: Op = "id") -> "AlgebraElement":
        self._own(e)
        mapping = self.pullback_map(target, e.level, op)
        coeffs = e.coeffs
        return AlgebraElement(self, target, {ti: coeffs[si] for ti, si in enumerate(mapping) if si in coeffs})

    def _own(self, e: "AlgebraElement") -> None:
        if e.algebra is not self:
            raise ShiftMismatchError(f"element of {e.algebra.shift.name} used with {self.shift.name}")

    # elements

    def element(self, level: LevelIndex, coeffs: Dict[int, Scalar]) -> "AlgebraElement":
        return AlgebraElement(self, level, coeffs)

    def zero(self, level: LevelIndex = A_LEVEL) -> "AlgebraElement":
        return AlgebraElement(self, level, {})

    def unit(self, level: LevelIndex = A_LEVEL) -> "AlgebraElement":
        return AlgebraElement(self, level, dict.fromkeys(range(len(self.atoms(level))), scalars.ONE))

    def indicator(self, level: LevelIndex, indices: Iterable[int]) -> "AlgebraElement":
        return AlgebraElement(self, level, dict.fromkeys(indices, scalars.ONE))

    def atom_indicator(self, atom: Atom, level: LevelIndex) -> "AlgebraElement":
        self.atoms(level)
        return self.indicator(level, [self._atom_index[level][atom]])

    def class_indicator(self, i: int, l: int) -> "AlgebraElement":
        """``1_{E_i^l}`` at level ``(0, l)``."""
        return self.atom_indicator(Atom(EMPTY, i), LevelIndex(0, l))

    def embed_basic(self, b: BasicSet, level: Optional[LevelIndex] = None) -> "AlgebraElement":
        """Indicator of ``C(mu, nu)`` over the atoms of ``level``."""
        b = BasicSet(self.shift.alphabet.check_word(b.mu), self.shift.alphabet.check_word(b.nu))
        if level is None:
            level = b.min_level()
        key = (b, level)
        if key in self._embedded:
            return self._embedded[key]
        mu, nu = b.mu, b.nu
        if len(nu) > level.k or len(mu) + level.k - len(nu) > level.l:
            k = max(level.k, len(nu))
            suggested = LevelIndex(k, max(level.l, len(mu) + k - len(nu)))
            raise LevelError(
                f"C({self._fmt(mu)},{self._fmt(nu)}) needs a level of at least {suggested}, got {level}",
                suggested=suggested,
            )
        hits = []
        for i, atom in enumerate(self.atoms(level)):
            if atom.nu[: len(nu)] != nu:
                continue
            if (*mu, *atom.nu[len(nu) :]) in self.atom_extensions(atom, level):
                hits.append(i)
        result = self.indicator(level, hits)
        self._embedded[key] = result
        return result

    def cylinder(self, word: Word) -> "AlgebraElement":
        return self.embed_basic(BasicSet(EMPTY, word))

    def shifted_cylinder(self, word: Word) -> "AlgebraElement":
        """``1_{σ^{|word|}(C(word))}``, the support of ``S_word^* S_word``."""
        return self.embed_basic(BasicSet(word, EMPTY))

    def _fmt(self, word: Word) -> str:
        return self.shift.alphabet.format_word(word)

    # inclusions

    def iota_k(self, e: "AlgebraElement") -> "AlgebraElement":
        return e.at(LevelIndex(e.level.k + 1, e.level.l + 1))

    def refine_A(self, e: "AlgebraElement") -> "AlgebraElement":
        if e.level.k != 0:
            raise LevelError(f"refine_A expects an element of a level (0,l), got {e.level}")
        return e.at(LevelIndex(0, e.level.l + 1))

    def evaluate(self, e: "AlgebraElement", word: Word, t: TailType) -> Scalar:
        """Value of ``e`` on the points ``word x`` with ``x`` of tail type ``t``."""
        self._own(e)
        if len(word) < e.level.k:
            raise LevelError(f"window of length {len(word)} does not determine an element of level {e.level}")
        if not self.shift.admits(t, word):
            raise InputError(f"{self._fmt(word)} cannot precede a point of that tail type")
        return e.coeffs.get(self.atom_of(word, t, e.level), scalars.ZERO)

    def class_polynomial(self, i: int, l: int) -> List[Tuple[Word, bool]]:
        """``1_{E_i^l}`` as a product over ``mu`` of ``1_{σ^{|mu|}C(mu)}`` (True) or its complement (False)."""
        extensions = self.classes(l)[i].extensions
        words = self.shift.language_up_to(l)
        return [(mu, mu in extensions) for mu in words]

    # diagrams

    def tower_levels(self, tower: str, depth: int) -> List[LevelIndex]:
        if tower == "A":
            return [LevelIndex(0, j) for j in range(depth + 1)]
        if tower == "diagonal":
            return [LevelIndex(j, j) for j in range(depth + 1)]
        raise InputError(f"unknown tower {tower!r}; expected 'A' or 'diagonal'")

    def bratteli(self, tower: str, depth: int) -> BratteliDiagram:
        if depth < 1:
            raise InputError("Bratteli depth must be at least 1")
        levels = self.tower_levels(tower, depth)
        sizes = [len(self.atoms(level)) for level in levels]
        incidence = []
        for lower, upper in zip(levels, levels[1:]):
            mapping = self.pullback_map(upper, lower, "id")
            incidence.append([[1 if mapping[p] == q else 0 for q in range(len(self.atoms(lower)))]
                              for p in range(len(mapping))])
        stable_from = next((j for j in range(len(incidence) - 1) if incidence[j] == incidence[j + 1]), None)
        diagram = BratteliDiagram(
            tower=tower,
            sizes=sizes,
            incidence=incidence,
            stable=stable_from is not None,
            stable_from=stable_from,
            stable_matrix=incidence[stable_from] if stable_from is not None else None,
        )
        logger.info("%s: %s-tower sizes %s (stable=%s)", self.shift.name, tower, sizes, diagram.stable)
        return diagram


_algebras: "weakref.WeakKeyDictionary[Subshift, SetAlgebra]" = weakref.WeakKeyDictionary()


def get_algebra(shift: Subshift) -> SetAlgebra:
    """Shared snapshot algebra of ``shift``."""
    if shift not in _algebras:
        _algebras[shift] = SetAlgebra(shift)
    return _algebras[shift]


def k0_presentation(d: BratteliDiagram) -> K0Presentation:
    """Direct system of integer lattices of a diagram, with Smith data when stationary."""
    unit = [1] * d.sizes[0]
    for matrix in d.incidence:
        unit = [sum(row[q] * unit[q] for q in range(len(unit))) for row in matrix]
    if not d.stable or d.stable_matrix is None:
        logger.warning("%s-tower is not stationary within depth %d", d.tower, len(d.incidence))
        return K0Presentation(
            tower=d.tower,
            sizes=d.sizes,
            stationary=False,
            truncated=True,
            order_unit=unit,
            note="non-stationary system; direct limit of Z^m(l) along the listed incidence maps",
        )
    matrix = d.stable_matrix
    m = len(matrix)
    domain_matrix = DomainMatrix([[ZZ(v) for v in row] for row in matrix], (m, len(matrix[0])), ZZ)
    determinant = int(domain_matrix.det()) if m == len(matrix[0]) else None
    factors = [int(f) for f in invariant_factors(domain_matrix)]
    if determinant in (1, -1):
        group = "Z" if m == 1 else f"Z^{m}"
        note = "stationary unimodular system"
    else:
        group = f"lim(Z^{m}, B)"
        note = "stationary system with a non-invertible connecting map"
    return K0Presentation(
        tower=d.tower,
        sizes=d.sizes,
        stationary=True,
        truncated=False,
        group=group,
        matrix=matrix,
        determinant=determinant,
        invariant_factors=factors,
        order_unit=unit,
        note=note,
    )


class AlgebraElement:
    """Exact coefficient vector over the atoms of one level."""

    __slots__ = ("algebra", "coeffs", "level")
    __hash__ = None

    def __init__(self, algebra: SetAlgebra, level: LevelIndex, coeffs: Dict[int, Scalar]) -> None:
        self.algebra = algebra
        self.level = level
        self.coeffs: Dict[int, Scalar] = {
            i: scalars.normalize(c) for i, c in coeffs.items() if not scalars.is_zero(c)
        }

    @property
    def shift(self) -> Subshift:
        return self.algebra.shift

    def at(self, level: LevelIndex) -> "AlgebraElement":
        if level == self.level:
            return self
        if not level.refines(self.level):
            raise LevelError(
                f"cannot move an element of level {self.level} to the coarser level {level}",
                suggested=level.join(self.level),
            )
        return self.algebra.pullback(self, level, "id")

    def items(self) -> Iterator[Tuple[Atom, Scalar]]:
        atoms = self.algebra.atoms(self.level)
        for i in sorted(self.coeffs):
            yield atoms[i], self.coeffs[i]

    def _coerce(self, other: object) -> Optional["AlgebraElement"]:
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                raise ShiftMismatchError(
                    f"cannot combine elements of {self.shift.name} and {other.shift.name}"
                )
            return other
        if scalars.is_scalar(other):
            return self.algebra.unit(self.level) * other
        return None

    def _aligned(self, other: "AlgebraElement") -> Tuple["AlgebraElement", "AlgebraElement"]:
        level = self.level.join(other.level)
        return self.at(level), other.at(level)

    def __add__(self, other: object) -> "AlgebraElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._aligned(other)
        coeffs = dict(a.coeffs)
        for i, c in b.coeffs.items():
            coeffs[i] = scalars.add(coeffs[i], c) if i in coeffs else c
        return AlgebraElement(self.algebra, a.level, coeffs)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.level, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: object) -> "AlgebraElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "AlgebraElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: object) -> "AlgebraElement":
        if scalars.is_scalar(other):
            c = scalars.normalize(other)
            return AlgebraElement(self.algebra, self.level, {i: scalars.mul(v, c) for i, v in self.coeffs.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._aligned(other)
        return AlgebraElement(
            self.algebra, a.level, {i: scalars.mul(c, b.coeffs[i]) for i, c in a.coeffs.items() if i in b.coeffs}
        )

    def __rmul__(self, other: object) -> "AlgebraElement":
        if scalars.is_scalar(other):
            return self * other
        return NotImplemented

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.level, {i: scalars.conjugate(c) for i, c in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._aligned(other)
        return a.coeffs == b.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_indicator(self) -> bool:
        return all(scalars.is_one(c) for c in self.coeffs.values())

    def require_indicator(self) -> "AlgebraElement":
        if not self.is_indicator():
            raise NotIndicatorError(f"expected a 0/1 element, got {self}")
        return self

    def is_nonnegative(self) -> bool:
        return all(scalars.is_nonnegative_real(c) for c in self.coeffs.values())

    def support(self) -> "AlgebraElement":
        return self.algebra.indicator(self.level, self.coeffs)

    def coefficient_groups(self) -> List[Tuple[Scalar, List[Atom]]]:
        """Atoms grouped by coefficient, in order of first appearance."""
        groups: Dict[Scalar, List[Atom]] = {}
        for atom, c in self.items():
            groups.setdefault(c, []).append(atom)
        return list(groups.items())

    def format_support(self, atoms: Sequence[Atom]) -> str:
        return "[" + " ".join(self.algebra.describe_atom(a) for a in atoms) + f"]@{self.level}"

    def __str__(self) -> str:
        if not self.coeffs:
            return f"0@{self.level}"
        parts = [f"{scalars.format_scalar(c)}*{self.format_support(atoms)}" for c, atoms in self.coefficient_groups()]
        return " + ".join(parts)

    __repr__ = __str__
