"""Exact arithmetic in the cyclotomic field Q(zeta_N).

An element is stored as its coordinate vector in the power basis
1, z, ..., z^(phi(N)-1), where z = zeta_N, reduced modulo the N-th
cyclotomic polynomial. Coordinates are arbitrary-precision rationals.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb, gcd

from gmpy2 import mpq
from sympy import cyclotomic_poly, divisors, factorint, totient
from sympy.abc import x as _x

from ._linalg import nullspace

__all__ = [
    "CyclotomicField",
    "make_rational",
    "make_root_of_unity",
    "inv",
    "Scalar",
    "field",
    "root_of_unity_order",
    "factor_scalar",
    "resonance_exists_bounded",
    "resonance_exists_structured",
    "resonance",
    "Resonance",
]

Rational = mpq


def to_rational(value) -> mpq:
    return mpq(value)


class CyclotomicField:
    """The field Q(zeta_N). Use :func:`field` to obtain shared instances."""

    def __init__(self, N: int):
        if N < 1:
            raise ValueError(f"conductor must be positive, got {N}")
        self.N = N
        self.degree = int(totient(N))
        coeffs = cyclotomic_poly(N, _x, polys=True).all_coeffs()[::-1]
        self.cyclotomic = tuple(int(c) for c in coeffs)
        # every root of unity in Q(zeta_N) has order dividing this
        self.unit_order = N if N % 2 == 0 else 2 * N
        self._reduction = self._reduction_table()
        self.zero = Scalar(self, (mpq(0),) * self.degree)
        self.one = self.rational(1)
        self.z = self.root_of_unity(1)

    def _reduction_table(self):
        # rows give z^k mod Phi_N for k = degree .. max(2*degree - 2, N - 1)
        p = self.degree
        table = []
        current = [mpq(0)] * p
        # z^p = -(c_0 + c_1 z + ... + c_{p-1} z^{p-1})
        for i in range(p):
            current[i] = mpq(-self.cyclotomic[i])
        for _ in range(max(p - 1, self.N - p, 1)):
            table.append(tuple(current))
            top = current[-1]
            current = [mpq(0)] + current[:-1]
            if top:
                for i in range(p):
                    current[i] -= top * self.cyclotomic[i]
        return table

    def __repr__(self):
        return f"CyclotomicField({self.N})"

    def __reduce__(self):
        return (field, (self.N,))

    def rational(self, p, q=1) -> "Scalar":
        if q == 0:
            raise ValueError("zero denominator")
        value = to_rational(p) / to_rational(q)
        return Scalar(self, (value,) + (mpq(0),) * (self.degree - 1))

    def root_of_unity(self, j: int) -> "Scalar":
        """zeta_N ** j, with j reduced mod N."""
        j %= self.N
        coords = [mpq(0)] * max(self.degree, j + 1)
        coords[j] = mpq(1)
        return Scalar(self, self._reduce(coords))

    def unit_root(self, j: int) -> "Scalar":
        """The j-th power of a generator of all roots of unity in the field."""
        if self.unit_order == self.N:
            return self.root_of_unity(j)
        # N odd: -zeta_N^((N+1)/2) squares to zeta_N and has order 2N
        gen = -self.root_of_unity((self.N + 1) // 2)
        return gen ** (j % self.unit_order)

    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field is not self:
                raise ValueError(f"scalar from {value.field} used in {self}")
            return value
        return self.rational(value)

    def _reduce(self, conv) -> tuple:
        p = self.degree
        out = list(conv[:p]) + [mpq(0)] * (p - len(conv[:p]))
        for k in range(p, len(conv)):
            c = conv[k]
            if c:
                row = self._reduction[k - p]
                for i in range(p):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(out)


@lru_cache(maxsize=None)
def field(N: int) -> CyclotomicField:
    """Shared field instance for conductor N."""
    return CyclotomicField(N)


class Scalar:
    """Immutable element of Q(zeta_N)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: CyclotomicField, coords):
        self.field = field
        self.coords = tuple(coords)

    def __reduce__(self):
        return (Scalar, (self.field, self.coords))

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise ValueError(f"mixed fields {self.field} and {other.field}")
            return other
        if isinstance(other, (int, type(mpq(0)))):
            return self.field.rational(other)
        try:
            return self.field.rational(mpq(other))
        except (TypeError, ValueError):
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Scalar(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Scalar(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coords, other.coords
        p = len(a)
        if p == 1:
            return Scalar(self.field, (a[0] * b[0],))
        if not any(b[1:]):
            c = b[0]
            return Scalar(self.field, tuple(ai * c for ai in a))
        if not any(a[1:]):
            c = a[0]
            return Scalar(self.field, tuple(bi * c for bi in b))
        conv = [mpq(0)] * (2 * p - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        return Scalar(self.field, self.field._reduce(conv))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        a = self.coords
        if not any(a[1:]):
            return Scalar(self.field, (1 / a[0],) + a[1:])
        inv = _poly_inverse_mod(list(a), [mpq(c) for c in self.field.cyclotomic])
        return Scalar(self.field, self.field._reduce(inv))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field is other.field and self.coords == other.coords
        if isinstance(other, (int, type(mpq(0)))):
            return self.coords[0] == other and not any(self.coords[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.coords[1:]):
            return hash(self.coords[0])
        return hash(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def galois(self, k: int) -> "Scalar":
        """Image under the automorphism z -> z^k (k coprime to N)."""
        out = self.field.zero
        for i, c in enumerate(self.coords):
            if c:
                out = out + self.field.root_of_unity(i * k) * c
        return out

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            mag = str(abs(c))
            zpow = "z" if i == 1 else f"z^{i}"
            text = mag if i == 0 else (zpow if abs(c) == 1 else f"{mag}*{zpow}")
            if not parts:
                parts.append(text if c > 0 else f"-{text}")
            else:
                parts.append(f"+ {text}" if c > 0 else f"- {text}")
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Scalar({self}; N={self.field.N})"


def _poly_trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = list(a)
    _poly_trim(a)
    q = [mpq(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[i + shift] -= c * bi
        _poly_trim(a)
    return _poly_trim(q), a


def _poly_sub_mul(a, q, b):
    # a - q*b
    out = list(a) + [mpq(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, qi in enumerate(q):
        if qi:
            for j, bj in enumerate(b):
                out[i + j] -= qi * bj
    return _poly_trim(out)


def _poly_inverse_mod(a, m):
    """Inverse of a modulo m over Q by the extended Euclidean algorithm."""
    r0, r1 = list(m), _poly_trim(list(a))
    s0, s1 = [], [mpq(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub_mul(s0, q, s1)
    if not r1:
        raise ZeroDivisionError("element not invertible")
    c = r1[0]
    return [si / c for si in s1]


def make_rational(p, q=1, N: int = 1) -> Scalar:
    """The rational p/q inside Q(zeta_N)."""
    return field(N).rational(p, q)


def make_root_of_unity(j: int, N: int) -> Scalar:
    """zeta_N ** j."""
    return field(N).root_of_unity(j)


def inv(a: Scalar) -> Scalar:
    return a.inverse()


def root_of_unity_order(a: Scalar) -> int | None:
    """Least s >= 1 with a**s == 1, or None when a is not a root of unity."""
    M = a.field.unit_order
    if a.is_zero() or a ** M != 1:
        return None
    for s in divisors(M):
        if a ** s == 1:
            return int(s)
    raise AssertionError("unreachable: a^M == 1 implies some divisor works")


def factor_scalar(a: Scalar) -> tuple[mpq, int] | None:
    """Write a = q * w^j with q > 0 rational and w = field.unit_root(1).

    Returns (q, j) or None if a is not of that form.
    """
    K = a.field
    if a.is_zero():
        return None
    w_inv = K.unit_root(1).inverse()
    b = a
    for j in range(K.unit_order):
        if b.is_rational() and b.coords[0] > 0:
            return b.coords[0], j
        b = b * w_inv
    return None


def _graded_vectors(m: int, total: int):
    """Exponent vectors of length m summing to total, ascending graded-lex."""
    if m == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _graded_vectors(m - 1, total - first):
            yield (first,) + rest


def resonance_exists_bounded(lambdas, bound: int):
    """First exponent vector i with 1 <= |i| <= bound and prod lambda^i == 1.

    Search order is ascending total degree, then ascending lex. A None
    result is evidence only up to the bound, not a proof of absence.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    lambdas = list(lambdas)
    m = len(lambdas)
    if m == 0:
        return None
    one = lambdas[0].field.one
    powers = [[one] for _ in lambdas]
    for k, lam in enumerate(lambdas):
        for _ in range(bound):
            powers[k].append(powers[k][-1] * lam)
    for total in range(1, bound + 1):
        for vec in _graded_vectors(m, total):
            prod = one
            for k, e in enumerate(vec):
                if e:
                    prod = prod * powers[k][e]
            if prod == 1:
                return vec
    return None


def _prime_exponent_matrix(qs):
    vectors = []
    for q in qs:
        q = mpq(q)
        if q <= 0:
            raise ValueError(f"factored eigenvalue needs positive rational part, got {q}")
        vec = dict(factorint(int(q.numerator)))
        for p, e in factorint(int(q.denominator)).items():
            vec[p] = vec.get(p, 0) - e
        vec.pop(1, None)
        vectors.append(vec)
    primes = sorted({p for v in vectors for p in v})
    return [[v.get(p, 0) for v in vectors] for p in primes]


def _grlex_key(vec):
    return (sum(vec), vec)


def _structured_witness(qs, js, modulus: int):
    m = len(qs)
    A = _prime_exponent_matrix(qs)
    rays = []
    for size in range(1, m + 1):
        for support in combinations(range(m), size):
            if A:
                sub = [[mpq(row[k]) for k in support] for row in A]
                basis = nullspace(sub, size)
            else:
                basis = [[mpq(int(i == t)) for i in range(size)] for t in range(size)]
            if len(basis) != 1:
                continue
            gen = basis[0]
            if all(c > 0 for c in gen) or all(c < 0 for c in gen):
                rays.append((support, [abs(c) for c in gen]))
    candidates = []
    for support, gen in rays:
        den = 1
        for c in gen:
            den = den * int(c.denominator) // gcd(den, int(c.denominator))
        ints = [int(c * den) for c in gen]
        g = 0
        for c in ints:
            g = gcd(g, c)
        ints = [c // g for c in ints]
        vec = [0] * m
        for k, c in zip(support, ints):
            vec[k] = c
        phase = sum(v * j for v, j in zip(vec, js)) % modulus
        t = modulus // gcd(modulus, phase) if phase else 1
        candidates.append(tuple(t * v for v in vec))
    if not candidates:
        return None
    best = min(candidates, key=_grlex_key)
    return _least_witness(A, js, modulus, sum(best)) or best


_WITNESS_SEARCH_LIMIT = 200_000


def _least_witness(A, js, modulus, max_degree):
    """Graded-lex-first solution of the exponent system with degree <= max_degree.

    Works purely on prime-exponent vectors and phases. Gives up (None) when
    the search space exceeds the limit.
    """
    m = len(js)
    if comb(max_degree + m, m) > _WITNESS_SEARCH_LIMIT:
        return None
    for total in range(1, max_degree + 1):
        for vec in _graded_vectors(m, total):
            if sum(v * j for v, j in zip(vec, js)) % modulus:
                continue
            if all(sum(a * v for a, v in zip(row, vec)) == 0 for row in A):
                return vec
    return None


def resonance_exists_structured(parts, N: int | None = None):
    """Decide whether prod (q_k zeta_N^{j_k})^{i_k} = 1 has a nonzero solution in N^m.

    ``parts`` is a sequence of (q, j) with q a positive rational. The
    rational parts give the linear system sum i_k v_k = 0 on prime-exponent
    vectors; its nonnegative solution cone is nonzero exactly when it has an
    extreme ray, and extreme rays are found by enumerating minimal supports.
    Scaling a ray by a suitable factor then satisfies the congruence
    sum i_k j_k = 0 (mod N). Returns a witness vector or None (certified).
    """
    parts = list(parts)
    if not parts:
        return None
    if N is None:
        if any(j % 1 for _, j in parts):
            raise ValueError("conductor required")
        N = 1
    qs = [to_rational(q) for q, _ in parts]
    js = [int(j) for _, j in parts]
    return _structured_witness(qs, js, N)


class Resonance:
    """Outcome of a resonance query on scalars."""

    __slots__ = ("witness", "certified")

    def __init__(self, witness, certified: bool):
        self.witness = witness
        self.certified = certified

    @property
    def exists(self) -> bool:
        return self.witness is not None

    def __repr__(self):
        return f"Resonance(witness={self.witness}, certified={self.certified})"


def resonance(lambdas, bound: int = 8) -> Resonance:
    """Resonance query that is global when every scalar factors as q*w^j.

    Falls back to the bounded search otherwise (``certified`` is then
    False unless a witness was found).
    """
    lambdas = list(lambdas)
    if not lambdas:
        return Resonance(None, True)
    K = lambdas[0].field
    factored = [factor_scalar(lam) for lam in lambdas]
    if all(f is not None for f in factored):
        witness = _structured_witness(
            [q for q, _ in factored], [j for _, j in factored], K.unit_order
        )
        return Resonance(witness, True)
    witness = resonance_exists_bounded(lambdas, bound)
    return Resonance(witness, witness is not None)
