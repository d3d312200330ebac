"""Expression language for the rewrite command.

Grammar::

    expr    := term (("+" | "-") term)*
    term    := factor (["*"] factor)*
    factor  := "-" factor | primary
    primary := NUMBER ["/" NUMBER] | "i" | "I" | "S(" word ")" | "S*(" word ")"
             | "P(" word ";" word ")" | "(" expr ")"

``P(mu;nu)`` is the degree-0 embedding of ``1_{C(mu,nu)}``; ``i`` is the
imaginary unit. Juxtaposition multiplies.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from . import scalars
from .calculus import StarCalculus, StarElement
from .errors import InputError
from .scalars import Scalar

Value = Union[Scalar, StarElement]

TOKEN_PATTERN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<op>S\*\(|S\(|P\(|[-+*/();])|(?P<name>[iI]))")


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def format_caret(expression: str, column: int) -> str:
    return f"{expression}\n{' ' * column}^"


class ExpressionParser:
    """Recursive-descent evaluator producing normal forms directly."""

    def __init__(self, calculus: StarCalculus, text: str) -> None:
        self.calculus = calculus
        self.text = text
        self.pos = 0

    def error(self, detail: str, pos: int) -> InputError:
        return InputError(detail, column=pos, context=self.text)

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> Token:
        self._skip()
        if self.pos >= len(self.text):
            return Token("end", "", self.pos)
        match = TOKEN_PATTERN.match(self.text, self.pos)
        if not match:
            raise self.error(f"unexpected character {self.text[self.pos]!r}", self.pos)
        kind = match.lastgroup or "op"
        return Token(kind, match.group(kind), match.start(kind))

    def _next(self) -> Token:
        token = self._peek()
        self.pos = token.pos + len(token.text)
        return token

    def _expect(self, text: str) -> Token:
        token = self._next()
        if token.text != text:
            raise self.error(f"expected {text!r}, found {token.text or 'end of input'!r}", token.pos)
        return token

    def tokens(self) -> Iterator[Token]:
        """Raw token stream, without the word scanning done inside ``S(`` and ``P(``."""
        while (token := self._next()).kind != "end":
            yield token

    def _word_until(self, stops: str) -> tuple:
        start = self.pos
        end = start
        while end < len(self.text) and self.text[end] not in stops:
            end += 1
        if end >= len(self.text):
            raise self.error(f"unterminated word, expected one of {stops!r}", start)
        try:
            word = self.calculus.shift.alphabet.parse_word(self.text[start:end])
        except InputError as e:
            raise self.error(e.detail, start) from None
        self.pos = end
        return word

    def parse(self) -> StarElement:
        value = self.expr()
        token = self._peek()
        if token.kind != "end":
            raise self.error(f"unexpected {token.text!r}", token.pos)
        return self._as_element(value)

    def _as_element(self, value: Value) -> StarElement:
        if isinstance(value, StarElement):
            return value
        return self.calculus.scalar(value)

    def _add(self, a: Value, b: Value, sign: int) -> Value:
        if not isinstance(a, StarElement) and not isinstance(b, StarElement):
            return scalars.add(a, b) if sign > 0 else scalars.sub(a, b)
        a, b = self._as_element(a), self._as_element(b)
        return a + b if sign > 0 else a - b

    def _mul(self, a: Value, b: Value) -> Value:
        if not isinstance(a, StarElement) and not isinstance(b, StarElement):
            return scalars.mul(a, b)
        if not isinstance(a, StarElement):
            return b.scale(a)
        if not isinstance(b, StarElement):
            return a.scale(b)
        return a * b

    def expr(self) -> Value:
        value = self.term()
        while True:
            token = self._peek()
            if token.text not in ("+", "-"):
                return value
            self._next()
            value = self._add(value, self.term(), 1 if token.text == "+" else -1)

    def term(self) -> Value:
        value = self.factor()
        while True:
            token = self._peek()
            if token.text == "*":
                self._next()
                value = self._mul(value, self.factor())
            elif token.kind in ("number", "name") or token.text in ("(", "S(", "S*(", "P("):
                value = self._mul(value, self.factor())
            else:
                return value

    def factor(self) -> Value:
        token = self._peek()
        if token.text == "-":
            self._next()
            value = self.factor()
            return -value
        return self.primary()

    def primary(self) -> Value:
        token = self._next()
        if token.kind == "number":
            numerator = int(token.text)
            if self._peek().text == "/":
                self._next()
                denominator_token = self._next()
                if denominator_token.kind != "number":
                    raise self.error("expected a denominator", denominator_token.pos)
                if int(denominator_token.text) == 0:
                    raise self.error("division by zero", denominator_token.pos)
                return Fraction(numerator, int(denominator_token.text))
            return Fraction(numerator)
        if token.kind == "name":
            return scalars.IMAG_UNIT if token.text == "i" else self.calculus.identity()
        if token.text == "S(":
            word = self._word_until(")")
            self._expect(")")
            return self.calculus.s(word)
        if token.text == "S*(":
            word = self._word_until(")")
            self._expect(")")
            return self.calculus.s_star(word)
        if token.text == "P(":
            mu = self._word_until(";)")
            self._expect(";")
            nu = self._word_until(")")
            self._expect(")")
            return self.calculus.basic(mu, nu)
        if token.text == "(":
            value = self.expr()
            self._expect(")")
            return value
        raise self.error(f"unexpected {token.text or 'end of input'!r}", token.pos)


def evaluate(calculus: StarCalculus, text: str) -> StarElement:
    return ExpressionParser(calculus, text).parse()
