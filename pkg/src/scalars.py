"""Exact scalars: rationals by default, Gaussian rationals when needed.

Real values are always held as ``fractions.Fraction``; values with a nonzero
imaginary part are ``QQ_I`` elements from sympy. Every arithmetic helper
returns a normalized value so equality comparisons stay exact.
"""

from fractions import Fraction
from typing import Any, Union

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational

Scalar = Union[Fraction, GaussianRational]

ZERO = Fraction(0)
ONE = Fraction(1)


def _fraction(q: Any) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def gaussian(re: Any, im: Any = 0) -> Scalar:
    """Build ``re + im*i`` from two rationals."""
    re, im = Fraction(re), Fraction(im)
    if im == 0:
        return re
    return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))


IMAG_UNIT = gaussian(0, 1)


def normalize(value: Any) -> Scalar:
    if isinstance(value, GaussianRational):
        if value.y == 0:
            return _fraction(value.x)
        return value
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"unsupported scalar {value!r}")


def is_scalar(value: Any) -> bool:
    return isinstance(value, (int, Fraction, GaussianRational)) and not isinstance(value, bool)


def _lift(value: Scalar) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    return QQ_I(QQ(value.numerator, value.denominator), QQ(0))


def add(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return normalize(_lift(a) + _lift(b))


def sub(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    return normalize(_lift(a) - _lift(b))


def mul(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return normalize(_lift(a) * _lift(b))


def inverse(a: Scalar) -> Scalar:
    if isinstance(a, Fraction):
        return 1 / a
    return normalize(QQ_I.one / a)


def conjugate(a: Scalar) -> Scalar:
    if isinstance(a, Fraction):
        return a
    return QQ_I.new(a.x, -a.y)


def power(a: Scalar, exponent: int) -> Scalar:
    if exponent < 0:
        return power(inverse(a), -exponent)
    if isinstance(a, Fraction):
        return a**exponent
    return normalize(a**exponent)


def is_zero(a: Scalar) -> bool:
    return not a


def is_one(a: Scalar) -> bool:
    return isinstance(a, Fraction) and a == 1


def is_nonnegative_real(a: Scalar) -> bool:
    return isinstance(a, Fraction) and a >= 0


def format_scalar(a: Scalar) -> str:
    if isinstance(a, Fraction):
        return str(a)
    re, im = _fraction(a.x), _fraction(a.y)
    imag = "i" if im == 1 else "-i" if im == -1 else f"{im}i"
    if re == 0:
        return imag
    sign = "+" if im > 0 else "-"
    magnitude = "i" if abs(im) == 1 else f"{abs(im)}i"
    return f"({re}{sign}{magnitude})"


def sort_key(a: Scalar) -> tuple:
    if isinstance(a, Fraction):
        return (a, Fraction(0))
    return (_fraction(a.x), _fraction(a.y))
