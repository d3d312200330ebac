"""Normal forms for the dense *-subalgebra spanned by ``S_nu f S_mu^*``.

A ``StarElement`` maps keys ``(nu, mu)`` to algebra elements. The normal
form multiplies every middle element by ``A_nu A_mu`` (its natural support),
drops zero terms, contracts ``S_{nu a} g S_{mu a}^*`` into
``S_nu (1_{C(a)} φ̃(g)) S_mu^*`` as long as possible, and puts all middle
elements on one common level.
"""

import logging
import weakref
from typing import Dict, Iterable, List, Optional, Tuple

from . import scalars
from .algebra import AlgebraElement, BasicSet, LevelIndex, SetAlgebra, get_algebra
from .correspondence import lambda_word, phi_tilde
from .errors import InputError, ShiftMismatchError
from .scalars import Scalar
from .shift import EMPTY, Subshift, Word, shortlex

logger = logging.getLogger(__name__)

Key = Tuple[Word, Word]


class StarElement:
    """Finite sum of monomials ``S_nu f S_mu^*`` kept in normal form."""

    __slots__ = ("calculus", "terms")
    __hash__ = None

    def __init__(self, calculus: "StarCalculus", terms: Dict[Key, AlgebraElement]) -> None:
        self.calculus = calculus
        self.terms = terms

    @property
    def shift(self) -> Subshift:
        return self.calculus.shift

    @property
    def level(self) -> Optional[LevelIndex]:
        for f in self.terms.values():
            return f.level
        return None

    def _coerce(self, other: object) -> Optional["StarElement"]:
        if isinstance(other, StarElement):
            if other.calculus is not self.calculus:
                raise ShiftMismatchError(f"cannot combine {self.shift.name} and {other.shift.name} elements")
            return other
        if isinstance(other, AlgebraElement):
            return self.calculus.from_algebra(other)
        if scalars.is_scalar(other):
            return self.calculus.scalar(other)
        return None

    def __add__(self, other: object) -> "StarElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for key, f in other.terms.items():
            terms[key] = terms[key] + f if key in terms else f
        return self.calculus.normalize(terms)

    __radd__ = __add__

    def __neg__(self) -> "StarElement":
        return StarElement(self.calculus, {key: -f for key, f in self.terms.items()})

    def __sub__(self, other: object) -> "StarElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "StarElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: object) -> "StarElement":
        if scalars.is_scalar(other):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.calculus.mul(self, other)

    def __rmul__(self, other: object) -> "StarElement":
        if scalars.is_scalar(other):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.calculus.mul(other, self)

    def scale(self, c: Scalar) -> "StarElement":
        c = scalars.normalize(c)
        if scalars.is_zero(c):
            return self.calculus.zero()
        return StarElement(self.calculus, {key: f * c for key, f in self.terms.items()})

    def adjoint(self) -> "StarElement":
        return self.calculus.adjoint(self)

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        for key in keys:
            mine, theirs = self.terms.get(key), other.terms.get(key)
            if mine is None or theirs is None:
                return False
            if not mine == theirs:
                return False
        return True

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> List[int]:
        return sorted({len(nu) - len(mu) for nu, mu in self.terms})

    def sorted_keys(self) -> List[Key]:
        return sorted(self.terms, key=lambda key: (shortlex(key[0]), shortlex(key[1])))

    def lines(self) -> List[str]:
        """Printable ``c * S(nu) [atoms] S*(mu)`` lines in a fixed order."""
        if not self.terms:
            return ["0"]
        fmt = self.shift.alphabet.format_word
        unit = self.calculus.algebra.unit()
        if list(self.terms) == [(EMPTY, EMPTY)] and self.terms[(EMPTY, EMPTY)] == unit:
            return ["I"]
        out = []
        for nu, mu in self.sorted_keys():
            f = self.terms[(nu, mu)]
            for c, atoms in f.coefficient_groups():
                parts = [scalars.format_scalar(c), "*"]
                if nu:
                    parts.append(f"S({fmt(nu)})")
                parts.append(f.format_support(atoms))
                if mu:
                    parts.append(f"S*({fmt(mu)})")
                out.append(" ".join(parts))
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())

    __repr__ = __str__


class StarCalculus:
    """Rewriting engine bound to one subshift."""

    def __init__(self, shift: Subshift) -> None:
        self.shift = shift
        self.algebra: SetAlgebra = get_algebra(shift)

    # construction

    def zero(self) -> StarElement:
        return StarElement(self, {})

    def identity(self) -> StarElement:
        return self.from_algebra(self.algebra.unit())

    def scalar(self, c: Scalar) -> StarElement:
        return self.identity().scale(c)

    def from_algebra(self, f: AlgebraElement) -> StarElement:
        """Degree-0 embedding of an element of D̃_X."""
        if f.algebra is not self.algebra:
            raise ShiftMismatchError(f"element of {f.shift.name} used with {self.shift.name}")
        return self.normalize({(EMPTY, EMPTY): f})

    def s(self, word: Word) -> StarElement:
        """``S_word``; the empty word gives ``I``."""
        word = self.shift.alphabet.check_word(word)
        return self.normalize({(word, EMPTY): self.algebra.unit()})

    def s_star(self, word: Word) -> StarElement:
        return self.s(word).adjoint()

    def a(self, word: Word) -> StarElement:
        """``A_mu = S_mu^* S_mu``."""
        return self.from_algebra(self.algebra.shifted_cylinder(self.shift.alphabet.check_word(word)))

    def basic(self, mu: Word, nu: Word) -> StarElement:
        """Degree-0 embedding of ``1_{C(mu, nu)}``."""
        return self.from_algebra(self.algebra.embed_basic(BasicSet(mu, nu)))

    # normal form

    def normalize(self, terms: Dict[Key, AlgebraElement]) -> StarElement:
        pending: Dict[Key, AlgebraElement] = {}
        for (nu, mu), f in terms.items():
            f = f * self.algebra.shifted_cylinder(nu) * self.algebra.shifted_cylinder(mu)
            if not f.is_zero():
                pending[(nu, mu)] = f
        result: Dict[Key, AlgebraElement] = {}
        while pending:
            key = max(pending, key=lambda k: (len(k[0]) + len(k[1]), k))
            f = pending.pop(key)
            nu, mu = key
            if nu and mu and nu[-1] == mu[-1]:
                a = nu[-1]
                g = self.algebra.cylinder((a,)) * phi_tilde(f)
                if g.is_zero():
                    continue
                shorter = (nu[:-1], mu[:-1])
                pending[shorter] = pending[shorter] + g if shorter in pending else g
            else:
                result[key] = result[key] + f if key in result else f
        result = {key: f for key, f in result.items() if not f.is_zero()}
        if result:
            level = LevelIndex(0, 0)
            for f in result.values():
                level = level.join(f.level)
            result = {key: f.at(level) for key, f in result.items()}
        return StarElement(self, result)

    # algebra operations

    def _mul_monomials(self, left: Tuple[Key, AlgebraElement], right: Tuple[Key, AlgebraElement]) -> Optional[Tuple[Key, AlgebraElement]]:
        (nu, mu), f = left
        (nu2, mu2), g = right
        if nu2[: len(mu)] == mu:
            # S_mu^* S_{mu rho} = A_mu S_rho and f S_rho = S_rho λ̃_rho(f)
            rho = nu2[len(mu) :]
            return (nu + rho, mu2), lambda_word(rho, f) * g
        if mu[: len(nu2)] == nu2:
            rho = mu[len(nu2) :]
            return (nu, mu2 + rho), f * lambda_word(rho, g)
        return None

    def mul(self, x: StarElement, y: StarElement) -> StarElement:
        if x.calculus is not self or y.calculus is not self:
            raise ShiftMismatchError("operands belong to a different subshift")
        terms: Dict[Key, AlgebraElement] = {}
        for left in x.terms.items():
            for right in y.terms.items():
                product = self._mul_monomials(left, right)
                if product is None:
                    continue
                key, f = product
                if f.is_zero():
                    continue
                terms[key] = terms[key] + f if key in terms else f
        return self.normalize(terms)

    def product(self, factors: Iterable[StarElement]) -> StarElement:
        result = self.identity()
        for factor in factors:
            result = self.mul(result, factor)
        return result

    def adjoint(self, x: StarElement) -> StarElement:
        return StarElement(self, {(mu, nu): f.adjoint() for (nu, mu), f in x.terms.items()})

    def cylinder_projection(self, mu: Word, nu: Word) -> StarElement:
        """``S_nu S_mu^* S_mu S_nu^*``."""
        s_nu = self.s(nu)
        return self.product([s_nu, self.s_star(mu), self.s(mu), s_nu.adjoint()])

    # grading

    def gauge_grade(self, x: StarElement) -> Dict[int, StarElement]:
        graded: Dict[int, Dict[Key, AlgebraElement]] = {}
        for (nu, mu), f in x.terms.items():
            graded.setdefault(len(nu) - len(mu), {})[(nu, mu)] = f
        return {d: StarElement(self, terms) for d, terms in sorted(graded.items())}

    def gauge_act(self, x: StarElement, z: Scalar) -> StarElement:
        """``γ_z``: scale each degree-d part by ``z^d``. ``z`` must lie on the unit circle."""
        if not scalars.is_one(scalars.mul(z, scalars.conjugate(z))):
            raise InputError(f"gauge parameter {scalars.format_scalar(z)} is not on the unit circle")
        terms = {}
        for (nu, mu), f in x.terms.items():
            terms[(nu, mu)] = f * scalars.power(z, len(nu) - len(mu))
        return StarElement(self, terms)

    # the projections E_i^l

    def atom_projection(self, i: int, l: int) -> StarElement:
        """``E_i^l`` lifted from the commutative snapshot ``Ã_l``."""
        return self.from_algebra(self.algebra.class_indicator(i, l))

    def atom_projection_product(self, i: int, l: int) -> StarElement:
        """``E_i^l`` built as a product of ``A_mu`` and ``I - A_mu``."""
        identity = self.identity()
        factors = [self.a(mu) if inside else identity - self.a(mu) for mu, inside in self.algebra.class_polynomial(i, l)]
        return self.product(factors)


_calculi: "weakref.WeakKeyDictionary[Subshift, StarCalculus]" = weakref.WeakKeyDictionary()


def get_calculus(shift: Subshift) -> StarCalculus:
    if shift not in _calculi:
        _calculi[shift] = StarCalculus(shift)
    return _calculi[shift]
