"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace is insignificant)::

    expr    := sign? term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := base ('^' natural)?
    base    := variable | scalar | '(' expr ')'
    variable:= 'x' positive-integer
    scalar  := rational | rational? 'z' ('^' integer)?
    rational:= natural ('/' natural)?

``z`` denotes the primitive N-th root of unity of the ring's field. A sign
is accepted only at the start of an expression, so ``x1 + + x2`` is
rejected.
"""
from __future__ import annotations

import re

from .polyring import PolyRing, Polynomial

MAX_EXPONENT = 1 << 15

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>x(?P<index>\d+))
  | (?P<z>z)
  | (?P<num>\d+)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class PolynomialSyntaxError(ValueError):
    """Malformed polynomial text; carries 1-based line and column."""

    def __init__(self, message: str, src: str, pos: int):
        self.line = src.count("\n", 0, pos) + 1
        self.column = pos - (src.rfind("\n", 0, pos) + 1) + 1
        self.pos = pos
        super().__init__(f"{message} at line {self.line}, column {self.column}")


class UnknownVariableError(PolynomialSyntaxError):
    pass


class ExponentOverflowError(PolynomialSyntaxError):
    pass


def _tokenize(src: str):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise PolynomialSyntaxError(f"unexpected character {src[pos]!r}", src, pos)
        kind = m.lastgroup
        if kind == "index":
            kind = "var"
        if kind != "ws":
            text = m.group(kind)
            if kind == "op":
                kind = text
            tokens.append((kind, text, pos, m))
        pos = m.end()
    tokens.append(("end", "", len(src), None))
    return tokens


class _Parser:
    def __init__(self, src: str, ring: PolyRing):
        self.src = src
        self.ring = ring
        self.K = ring.field
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def kind(self):
        return self.tokens[self.i][0]

    def error(self, message, cls=PolynomialSyntaxError):
        raise cls(message, self.src, self.tokens[self.i][2])

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            self.error(f"expected {kind!r}, found {found}")
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.kind != "end":
            self.error(f"unexpected {self.tokens[self.i][1]!r}")
        return p

    def expr(self) -> Polynomial:
        negate = False
        if self.kind in ("+", "-"):
            negate = self.take()[0] == "-"
        p = self.term()
        if negate:
            p = -p
        while self.kind in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.kind == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        p = self.base()
        if self.kind == "^":
            self.take()
            p = p ** self.natural()
        return p

    def natural(self) -> int:
        if self.kind != "num":
            self.error("expected a natural-number exponent")
        value = int(self.take()[1])
        if value > MAX_EXPONENT:
            self.i -= 1
            self.error(f"exponent {value} exceeds limit {MAX_EXPONENT}", ExponentOverflowError)
        return value

    def base(self) -> Polynomial:
        kind = self.kind
        if kind == "var":
            tok = self.tokens[self.i]
            index = int(tok[3].group("index"))
            if not 1 <= index <= self.ring.n:
                self.error(
                    f"unknown variable {tok[1]} (ring has x1..x{self.ring.n})",
                    UnknownVariableError,
                )
            self.take()
            return self.ring.var(index)
        if kind == "num":
            value = self.rational()
            if self.kind == "z":
                return self.ring.const(value * self.zeta())
            return self.ring.const(value)
        if kind == "z":
            return self.ring.const(self.zeta())
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {self.tokens[self.i][1]!r}")

    def rational(self):
        num = int(self.take("num")[1])
        if self.kind == "/":
            self.take()
            if self.kind != "num":
                self.error("expected denominator")
            den = int(self.take()[1])
            if den == 0:
                self.i -= 1
                self.error("zero denominator")
            return self.K.rational(num, den)
        return self.K.rational(num)

    def zeta(self):
        self.take("z")
        j = 1
        if self.kind == "^":
            self.take()
            sign = 1
            if self.kind == "-":
                self.take()
                sign = -1
            if self.kind != "num":
                self.error("expected an integer exponent for z")
            j = sign * int(self.take()[1])
        return self.K.root_of_unity(j)


def parse_polynomial(src: str, ring, conductor: int | None = None) -> Polynomial:
    """Parse ``src`` into a canonical polynomial.

    ``ring`` is a PolyRing, or a variable count n together with ``conductor``.
    """
    if not isinstance(ring, PolyRing):
        ring = PolyRing(int(ring), conductor or 1)
    return _Parser(src, ring).parse()


def parse_scalar(src: str, ring: PolyRing):
    """Parse text that must denote a constant; returns a Scalar."""
    p = parse_polynomial(src, ring)
    if p.degree() > 0:
        raise PolynomialSyntaxError("expected a constant", src, 0)
    return p.constant_term()
