"""The correspondence H_X = ⊕_a D̃_a and the maps λ̃_a, φ, φ̃_X.

Components of a ``CorrElement`` are algebra elements; each component ``f_a``
must vanish outside ``σ(C(a))``.
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

from . import scalars
from .algebra import AlgebraElement, BasicSet, LevelIndex, SetAlgebra, get_algebra
from .errors import InputError, ShiftMismatchError
from .shift import Subshift

logger = logging.getLogger(__name__)


def lambda_target(level: LevelIndex) -> LevelIndex:
    """Smallest level carrying λ̃_a of an element of ``level``."""
    if level.k >= 1:
        return LevelIndex(level.k - 1, max(level.k, level.l))
    return LevelIndex(0, level.l + 1)


def lambda_a(a: int, f: AlgebraElement) -> AlgebraElement:
    """``λ̃_a(f)(x) = f(ax)``, zero where ``ax`` is not a point."""
    f.shift.alphabet.check_word((a,))
    return f.algebra.pullback(f, lambda_target(f.level), ("lambda", a))


def lambda_word(word: Iterable[int], f: AlgebraElement) -> AlgebraElement:
    """``λ̃`` along a word, first symbol applied first: ``f(word x)``."""
    for a in word:
        f = lambda_a(a, f)
    return f


def phi_tilde(f: AlgebraElement) -> AlgebraElement:
    """``φ̃_X(f)(x) = f(σ(x))``."""
    return f.algebra.pullback(f, LevelIndex(f.level.k + 1, f.level.l), "shift")


def set_sigma_forward(e: AlgebraElement) -> AlgebraElement:
    """Indicator of ``σ(E)`` for an indicator ``1_E``, as the union of the supports of ``λ̃_a(1_E)``."""
    e.require_indicator()
    union = e.algebra.zero()
    for a in e.shift.alphabet:
        part = lambda_a(a, e)
        union = union + part - union * part
    return union


def set_sigma_backward(e: AlgebraElement) -> AlgebraElement:
    """Indicator of ``σ^{-1}(E)``."""
    return phi_tilde(e.require_indicator())


class CorrElement:
    """Alphabet-indexed family ``(f_a)`` with ``f_a ∈ D̃_a``, all at one level."""

    __slots__ = ("algebra", "components", "level")
    __hash__ = None

    def __init__(
        self,
        algebra: SetAlgebra,
        components: Dict[int, AlgebraElement],
        level: Optional[LevelIndex] = None,
        check: bool = True,
    ) -> None:
        self.algebra = algebra
        for a, f in components.items():
            algebra.shift.alphabet.check_word((a,))
            if f.algebra is not algebra:
                raise ShiftMismatchError(f"component {a} belongs to {f.shift.name}, not {algebra.shift.name}")
        if level is None:
            level = LevelIndex(0, 0)
            for f in components.values():
                level = level.join(f.level)
        self.level = level
        self.components: Dict[int, AlgebraElement] = {}
        for a, f in components.items():
            f = f.at(level)
            if f.is_zero():
                continue
            if check and not f * algebra.shifted_cylinder((a,)) == f:
                raise InputError(
                    f"component {algebra.shift.alphabet.tokens[a]} is not supported in σ(C({algebra.shift.alphabet.tokens[a]}))"
                )
            self.components[a] = f

    @property
    def shift(self) -> Subshift:
        return self.algebra.shift

    def component(self, a: int) -> AlgebraElement:
        return self.components.get(a, self.algebra.zero(self.level))

    def _coerce(self, other: "CorrElement") -> "CorrElement":
        if not isinstance(other, CorrElement):
            raise TypeError(f"expected a CorrElement, got {type(other).__name__}")
        if other.algebra is not self.algebra:
            raise ShiftMismatchError(f"cannot combine {self.shift.name} and {other.shift.name} correspondence elements")
        return other

    def __add__(self, other: "CorrElement") -> "CorrElement":
        other = self._coerce(other)
        symbols = set(self.components) | set(other.components)
        return CorrElement(self.algebra, {a: self.component(a) + other.component(a) for a in symbols}, check=False)

    def __neg__(self) -> "CorrElement":
        return CorrElement(self.algebra, {a: -f for a, f in self.components.items()}, self.level, check=False)

    def __sub__(self, other: "CorrElement") -> "CorrElement":
        return self + (-self._coerce(other))

    def scale(self, c: scalars.Scalar) -> "CorrElement":
        return CorrElement(self.algebra, {a: f * c for a, f in self.components.items()}, self.level, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CorrElement):
            return NotImplemented
        other = self._coerce(other)
        symbols = set(self.components) | set(other.components)
        return all(self.component(a) == other.component(a) for a in symbols)

    def is_zero(self) -> bool:
        return not self.components

    def __str__(self) -> str:
        if not self.components:
            return "0"
        tokens = self.shift.alphabet.tokens
        return "(" + ", ".join(f"{tokens[a]}: {self.components[a]}" for a in sorted(self.components)) + ")"

    __repr__ = __str__


def xi(shift: Subshift, a: int) -> CorrElement:
    """Basis element ``ξ_a``: ``1_{σ(C(a))}`` in slot ``a``, zero elsewhere."""
    algebra = get_algebra(shift)
    return CorrElement(algebra, {a: algebra.shifted_cylinder((a,))})


def zero_corr(shift: Subshift) -> CorrElement:
    return CorrElement(get_algebra(shift), {})


def inner_product(x: CorrElement, y: CorrElement) -> AlgebraElement:
    """``<(f_a), (g_a)> = Σ_a f_a^* g_a``."""
    y = x._coerce(y)
    total = x.algebra.zero()
    for a in sorted(set(x.components) & set(y.components)):
        total = total + x.components[a].adjoint() * y.components[a]
    return total


def right_action(x: CorrElement, f: AlgebraElement) -> CorrElement:
    if f.algebra is not x.algebra:
        raise ShiftMismatchError(f"cannot act with {f.shift.name} on {x.shift.name}")
    return CorrElement(x.algebra, {a: g * f for a, g in x.components.items()}, check=False)


def phi(f: AlgebraElement, x: CorrElement) -> CorrElement:
    """Left action ``φ(f)(g_a) = (λ̃_a(f) g_a)``."""
    if f.algebra is not x.algebra:
        raise ShiftMismatchError(f"cannot act with {f.shift.name} on {x.shift.name}")
    return CorrElement(x.algebra, {a: lambda_a(a, f) * g for a, g in x.components.items()}, check=False)


def theta(zeta: CorrElement, eta: CorrElement, x: CorrElement) -> CorrElement:
    """Rank-one operator ``θ_{ζ,η}(ξ) = ζ <η, ξ>``."""
    return right_action(zeta, inner_product(eta, x))


def rank_one_decomposition(f: AlgebraElement) -> List[Tuple[CorrElement, CorrElement]]:
    """Pairs ``(ξ_a λ̃_a(f), ξ_a)`` whose θ-sum is ``φ(f)``."""
    pairs = []
    for a in f.shift.alphabet:
        basis = xi(f.shift, a)
        pairs.append((right_action(basis, lambda_a(a, f)), basis))
    return pairs


def apply_rank_one(pairs: List[Tuple[CorrElement, CorrElement]], x: CorrElement) -> CorrElement:
    total = zero_corr(x.shift)
    for zeta, eta in pairs:
        total = total + theta(zeta, eta, x)
    return total


def basis_elements(shift: Subshift, generators: Iterable[BasicSet]) -> List[CorrElement]:
    """The elements ``ξ_a 1_b`` for every symbol ``a`` and basic set ``b``."""
    algebra = get_algebra(shift)
    result = []
    for b in generators:
        f = algebra.embed_basic(b)
        for a in shift.alphabet:
            element = right_action(xi(shift, a), f)
            if not element.is_zero():
                result.append(element)
    return result


def generator_sets(shift: Subshift, total: int) -> List[BasicSet]:
    """Basic sets ``C(mu, nu)`` with ``mu, nu ∈ L(X)`` and ``|mu| + |nu| <= total``."""
    words = shift.language_up_to(total)
    return [BasicSet(mu, nu) for nu in words for mu in words if len(mu) + len(nu) <= total]


def unit_corr_check(shift: Subshift) -> bool:
    """``φ(1)`` is the identity on every ``ξ_a``."""
    unit = get_algebra(shift).unit()
    return all(phi(unit, xi(shift, a)) == xi(shift, a) for a in shift.alphabet)

