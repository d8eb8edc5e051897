"""Sparse multivariate polynomials over Q(zeta_N).

Monomials are exponent tuples. The monomial order is graded
lexicographic with x1 > x2 > ... > xn; :func:`grlex_key` realizes it as a
Python sort key (larger key = larger monomial).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .scalar import CyclotomicField, Scalar, field

Monomial = tuple


def grlex_key(m: Monomial):
    return (sum(m), m)


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple:
    """All monomials of exact degree d in n variables, descending grlex."""
    if n == 0:
        return ((),) if d == 0 else ()
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def monomials_up_to(n: int, d: int) -> tuple:
    """All monomials of degree <= d, descending grlex."""
    out = []
    for e in range(d, -1, -1):
        out.extend(monomials_of_degree(n, e))
    return tuple(out)


@dataclass(frozen=True)
class GradedSlice:
    degree: int
    monomials: tuple
    filtered: bool = False

    @property
    def dimension(self) -> int:
        return len(self.monomials)


def graded_slice(n: int, d: int, filtered: bool = False) -> GradedSlice:
    mons = monomials_up_to(n, d) if filtered else monomials_of_degree(n, d)
    return GradedSlice(d, mons, filtered)


def slice_dimension(n: int, d: int) -> int:
    return comb(d + n - 1, n - 1)


def monomial_str(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts)


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class PolyRing:
    """The ring Q(zeta_N)[x1, ..., xn]."""

    def __init__(self, n: int, K: CyclotomicField | int = 1):
        if n < 1:
            raise ValueError("need at least one variable")
        self.n = n
        self.field = field(K) if isinstance(K, int) else K
        self._unit = (0,) * n

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.n == other.n and self.field is other.field

    def __hash__(self):
        return hash((self.n, self.field.N))

    def __repr__(self):
        return f"PolyRing(n={self.n}, N={self.field.N})"

    def __reduce__(self):
        return (PolyRing, (self.n, self.field.N))

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {self._unit: c} if c else {})

    def var(self, i: int) -> "Polynomial":
        """The variable x_i, 1-based."""
        if not 1 <= i <= self.n:
            raise IndexError(f"variable x{i} not in ring with {self.n} variables")
        exps = [0] * self.n
        exps[i - 1] = 1
        return Polynomial(self, {tuple(exps): self.field.one})

    def gens(self) -> list:
        return [self.var(i) for i in range(1, self.n + 1)]

    def monomial(self, exps, coeff=1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.n:
            raise ValueError(f"exponent vector {exps} has wrong length for n={self.n}")
        c = self.field(coeff)
        return Polynomial(self, {exps: c} if c else {})

    def from_terms(self, terms) -> "Polynomial":
        out = {}
        for m, c in terms:
            c = self.field(c)
            m = tuple(m)
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self, out)

    def parse(self, src: str) -> "Polynomial":
        from .parser import parse_polynomial

        return parse_polynomial(src, self)


class Polynomial:
    """Immutable sparse polynomial: a map monomial -> nonzero Scalar."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    def __reduce__(self):
        return (Polynomial, (self.ring, dict(self.terms)))

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def leading_monomial(self):
        return max(self.terms, key=grlex_key) if self.terms else None

    def coefficient(self, m) -> Scalar:
        return self.terms.get(tuple(m), self.ring.field.zero)

    def constant_term(self) -> Scalar:
        return self.coefficient(self.ring._unit)

    def sorted_terms(self):
        """Terms in descending grlex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def variables(self) -> set:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        try:
            return self.ring.const(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scalar_mul(self, c) -> "Polynomial":
        c = self.ring.field(c)
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)) or not isinstance(other, Polynomial):
            lifted = self._lift(other)
            if lifted is NotImplemented:
                return lifted
            other = lifted
        elif other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        if len(other.terms) == 1:
            (m2, c2), = other.terms.items()
            return Polynomial(self.ring, {_mono_mul(m, m2): c * c2 for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- structural operations -------------------------------------------
    def substitute(self, images) -> "Polynomial":
        """Ring-homomorphic evaluation x_i -> images[i]."""
        images = list(images)
        if len(images) != self.ring.n:
            raise ValueError(f"need {self.ring.n} images, got {len(images)}")
        target = images[0].ring if images else self.ring
        powers = [dict() for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = images[i] ** e
            return cache[e]

        out = target.zero
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def partial(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to x_i (1-based)."""
        if not 1 <= i <= self.ring.n:
            raise IndexError(f"no variable x{i}")
        k = i - 1
        out = {}
        for m, c in self.terms.items():
            e = m[k]
            if e:
                mm = m[:k] + (e - 1,) + m[k + 1:]
                out[mm] = c * e
        return Polynomial(self.ring, out)

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})

    def evaluate(self, point) -> Scalar:
        K = self.ring.field
        point = [K(p) for p in point]
        total = K.zero
        for m, c in self.terms.items():
            v = c
            for p, e in zip(point, m):
                if e:
                    v = v * p ** e
            total = total + v
        return total

    # -- printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            mono = monomial_str(m)
            if c.is_rational():
                r = c.coords[0]
                neg = r < 0
                mag = abs(r)
                if mono:
                    body = mono if mag == 1 else f"{mag}*{mono}"
                else:
                    body = str(mag)
            elif sum(1 for v in c.coords if v) == 1:
                # single power of z: print without parentheses
                neg = next(v for v in c.coords if v) < 0
                text = str(-c if neg else c)
                body = f"{text}*{mono}" if mono else text
            else:
                neg = False
                body = f"({c})*{mono}" if mono else f"({c})"
            if not pieces:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"Polynomial({self})"


def substitute(p: Polynomial, images) -> Polynomial:
    return p.substitute(images)


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    """d p / d x_i, 1-based."""
    return p.partial(i)


def homogeneous_component(p: Polynomial, d: int) -> Polynomial:
    return p.homogeneous_component(d)
