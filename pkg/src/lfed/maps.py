"""Endomorphisms, E-derivations, derivations and polynomial automorphisms."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import _linalg
from .polyring import PolyRing, Polynomial
from .scalar import Scalar

__all__ = [
    "Endomorphism",
    "EDerivation",
    "Derivation",
    "PolyAutomorphism",
    "NotInvertibleError",
    "MapShape",
    "apply_endo",
    "apply_ederivation",
    "apply_derivation",
    "conjugate",
    "classify",
]


class NotInvertibleError(ValueError):
    pass


def _linear_matrix(ring: PolyRing, polys, allow_constant: bool):
    """Coefficient matrix (and constants) of polynomials of degree <= 1."""
    K = ring.field
    n = ring.n
    rows, consts = [], []
    for p in polys:
        row = [K.zero] * n
        const = K.zero
        for m, c in p.terms.items():
            d = sum(m)
            if d == 0:
                if not allow_constant:
                    return None
                const = c
            elif d == 1:
                row[m.index(1)] = c
            else:
                return None
        rows.append(row)
        consts.append(const)
    return rows, consts


class Endomorphism:
    """K-algebra endomorphism given by the images of x1..xn."""

    def __init__(self, ring: PolyRing, images):
        images = tuple(images)
        if len(images) != ring.n:
            raise ValueError(f"endomorphism of n={ring.n} needs {ring.n} images, got {len(images)}")
        for p in images:
            if p.ring != ring:
                raise ValueError("image lives in a different ring")
        self.ring = ring
        self.images = images
        self._memo = {}

    @classmethod
    def identity(cls, ring: PolyRing) -> "Endomorphism":
        return cls(ring, ring.gens())

    @classmethod
    def from_matrix(cls, ring: PolyRing, A, translation=None) -> "Endomorphism":
        """phi(x_i) = sum_j A[i][j] x_j + translation[i]."""
        gens = ring.gens()
        images = []
        for i, row in enumerate(A):
            p = ring.zero
            for j, a in enumerate(row):
                p = p + gens[j].scalar_mul(a)
            if translation is not None:
                p = p + translation[i]
            images.append(p)
        return cls(ring, images)

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __reduce__(self):
        return (Endomorphism, (self.ring, self.images))

    def __repr__(self):
        return f"Endomorphism({', '.join(map(str, self.images))})"

    def apply_monomial(self, m) -> Polynomial:
        m = tuple(m)
        hit = self._memo.get(m)
        if hit is not None:
            return hit
        k = next((i for i, e in enumerate(m) if e), None)
        if k is None:
            out = self.ring.one
        else:
            rest = m[:k] + (m[k] - 1,) + m[k + 1:]
            out = self.apply_monomial(rest) * self.images[k]
        self._memo[m] = out
        return out

    def __call__(self, p: Polynomial) -> Polynomial:
        out = self.ring.zero
        for m, c in p.terms.items():
            out = out + self.apply_monomial(m).scalar_mul(c)
        return out

    apply = __call__

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """self o other, i.e. x -> self(other(x))."""
        return Endomorphism(self.ring, [self(q) for q in other.images])

    def linear_part(self):
        """(matrix A, constants c) when every image has degree <= 1, else None."""
        return _linear_matrix(self.ring, self.images, allow_constant=True)

    def is_linear(self) -> bool:
        lp = _linear_matrix(self.ring, self.images, allow_constant=False)
        return lp is not None

    def is_affine(self) -> bool:
        return self.linear_part() is not None

    def matrix(self):
        lp = _linear_matrix(self.ring, self.images, allow_constant=False)
        if lp is None:
            raise ValueError("endomorphism is not linear")
        return lp[0]


class EDerivation:
    """delta = I - phi."""

    kind = "ederivation"

    def __init__(self, phi: Endomorphism):
        self.phi = phi
        self.ring = phi.ring
        self._memo = {}

    @classmethod
    def from_images(cls, ring: PolyRing, images) -> "EDerivation":
        return cls(Endomorphism(ring, images))

    def __eq__(self, other):
        return isinstance(other, EDerivation) and self.phi == other.phi

    def __hash__(self):
        return hash(("delta", self.phi))

    def __reduce__(self):
        return (EDerivation, (self.phi,))

    def __repr__(self):
        return f"EDerivation(phi=({', '.join(map(str, self.phi.images))}))"

    def apply_monomial(self, m) -> Polynomial:
        m = tuple(m)
        hit = self._memo.get(m)
        if hit is None:
            hit = self.ring.monomial(m) - self.phi.apply_monomial(m)
            self._memo[m] = hit
        return hit

    def __call__(self, p: Polynomial) -> Polynomial:
        return p - self.phi(p)

    apply = __call__

    @property
    def grading(self) -> str:
        """'graded' (degree-preserving), 'filtered' (affine) or 'general'."""
        if self.phi.is_linear():
            return "graded"
        if self.phi.is_affine():
            return "filtered"
        return "general"

    def linear_part(self):
        return self.phi.linear_part()

    def definition(self) -> list:
        return [str(p) for p in self.phi.images]


class Derivation:
    """D = sum_i coeffs[i] * d/dx_i."""

    kind = "derivation"

    def __init__(self, ring: PolyRing, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != ring.n:
            raise ValueError(f"derivation of n={ring.n} needs {ring.n} coefficients, got {len(coeffs)}")
        self.ring = ring
        self.coeffs = coeffs
        self._memo = {}

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("D", self.coeffs))

    def __reduce__(self):
        return (Derivation, (self.ring, self.coeffs))

    def __repr__(self):
        return f"Derivation({', '.join(map(str, self.coeffs))})"

    def apply_monomial(self, m) -> Polynomial:
        m = tuple(m)
        hit = self._memo.get(m)
        if hit is None:
            hit = self(self.ring.monomial(m))
            self._memo[m] = hit
        return hit

    def __call__(self, p: Polynomial) -> Polynomial:
        out = self.ring.zero
        for i, c in enumerate(self.coeffs, start=1):
            if c:
                out = out + c * p.partial(i)
        return out

    apply = __call__

    @property
    def grading(self) -> str:
        lp = _linear_matrix(self.ring, self.coeffs, allow_constant=False)
        if lp is not None:
            return "graded"
        if _linear_matrix(self.ring, self.coeffs, allow_constant=True) is not None:
            return "filtered"
        return "general"

    def linear_part(self):
        return _linear_matrix(self.ring, self.coeffs, allow_constant=True)

    def definition(self) -> list:
        return [str(p) for p in self.coeffs]


def apply_endo(phi: Endomorphism, p: Polynomial) -> Polynomial:
    return phi(p)


def apply_ederivation(delta: EDerivation, p: Polynomial) -> Polynomial:
    return delta(p)


def apply_derivation(D: Derivation, p: Polynomial) -> Polynomial:
    return D(p)


class PolyAutomorphism:
    """An endomorphism together with a verified two-sided inverse."""

    def __init__(self, forward: Endomorphism, inverse: Endomorphism):
        ring = forward.ring
        gens = tuple(ring.gens())
        if forward.compose(inverse).images != gens or inverse.compose(forward).images != gens:
            raise NotInvertibleError("forward and inverse do not compose to the identity")
        self.forward = forward
        self.inverse = inverse
        self.ring = ring

    @classmethod
    def identity(cls, ring: PolyRing) -> "PolyAutomorphism":
        e = Endomorphism.identity(ring)
        return cls(e, e)

    @classmethod
    def linear(cls, ring: PolyRing, T) -> "PolyAutomorphism":
        """x_i -> sum_j T[i][j] x_j."""
        T = [[ring.field(x) for x in row] for row in T]
        try:
            T_inv = _linalg.inverse(T)
        except ZeroDivisionError:
            raise NotInvertibleError("matrix is singular") from None
        return cls(Endomorphism.from_matrix(ring, T), Endomorphism.from_matrix(ring, T_inv))

    @classmethod
    def translation(cls, ring: PolyRing, shifts) -> "PolyAutomorphism":
        """x_i -> x_i + shifts[i]."""
        gens = ring.gens()
        K = ring.field
        fwd = [g + K(c) for g, c in zip(gens, shifts)]
        inv = [g - K(c) for g, c in zip(gens, shifts)]
        return cls(Endomorphism(ring, fwd), Endomorphism(ring, inv))

    def compose(self, other: "PolyAutomorphism") -> "PolyAutomorphism":
        """self o other."""
        return PolyAutomorphism(self.forward.compose(other.forward), other.inverse.compose(self.inverse))

    def __eq__(self, other):
        return isinstance(other, PolyAutomorphism) and self.forward == other.forward

    def __hash__(self):
        return hash(self.forward)

    def __repr__(self):
        return f"PolyAutomorphism({', '.join(map(str, self.forward.images))})"


def conjugate(mapping, sigma: PolyAutomorphism):
    """sigma^{-1} o mapping o sigma, as a map of the same kind."""
    if isinstance(mapping, EDerivation):
        phi = sigma.inverse.compose(mapping.phi.compose(sigma.forward))
        return EDerivation(phi)
    if isinstance(mapping, Derivation):
        coeffs = [sigma.inverse(mapping(s)) for s in sigma.forward.images]
        return Derivation(mapping.ring, coeffs)
    if isinstance(mapping, Endomorphism):
        return sigma.inverse.compose(mapping.compose(sigma.forward))
    raise TypeError(f"cannot conjugate {type(mapping).__name__}")


# ---------------------------------------------------------------------------
# shape classification

@dataclass
class MapShape:
    """Classification record; ``params`` depend on ``kind``.

    Kinds: jordan-pairs, triangular, linear, affine, general (endomorphisms);
    derivation-affine, derivation-triangular, general (derivations).
    """

    kind: str
    map_kind: str
    params: dict = dc_field(default_factory=dict)
    linear: bool = False
    affine: bool = False

    def to_map(self, ring: PolyRing):
        p = self.params
        gens = ring.gens()
        if self.kind == "jordan-pairs":
            t, lams, tail = p["t"], p["lambdas"], p["tail"]
            images = []
            for i in range(t):
                images.append(gens[2 * i].scalar_mul(lams[i]) + gens[2 * i + 1])
                images.append(gens[2 * i + 1].scalar_mul(lams[i]))
            for k, lam in enumerate(tail):
                images.append(gens[2 * t + k].scalar_mul(lam))
            return EDerivation.from_images(ring, images)
        if self.kind == "triangular":
            images = [g.scalar_mul(lam) + f for g, lam, f in zip(gens, p["lambdas"], p["tails"])]
            return EDerivation.from_images(ring, images)
        if self.kind in ("linear", "affine"):
            shift = p.get("translation")
            return EDerivation(Endomorphism.from_matrix(ring, p["matrix"], shift))
        if self.kind in ("derivation-affine", "derivation-triangular"):
            coeffs = [g.scalar_mul(a) + b for g, a, b in zip(gens, p["a"], p["b"])]
            return Derivation(ring, coeffs)
        if self.kind == "general":
            return p["map"]
        raise ValueError(f"unknown shape {self.kind}")

    def summary(self) -> dict:
        out = {"kind": self.kind, "map_kind": self.map_kind, "linear": self.linear, "affine": self.affine}
        for key, value in self.params.items():
            if key == "map":
                continue
            out[key] = _jsonable(value)
        return out


def _jsonable(value):
    if isinstance(value, (Scalar, Polynomial)):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _split_diagonal(p: Polynomial, i: int):
    """Write p = lam * x_i + rest with rest free of the pure x_i term."""
    K = p.ring.field
    mono = tuple(int(k == i) for k in range(p.ring.n))
    lam = p.terms.get(mono, K.zero)
    rest = p - p.ring.monomial(mono, lam) if lam else p
    return lam, rest


def _classify_endo(delta: EDerivation) -> MapShape:
    ring = delta.ring
    phi = delta.phi
    n = ring.n
    gens = ring.gens()
    linear = phi.is_linear()
    affine = phi.is_affine()

    # Jordan pairs: x_{2i-1} -> l_i x_{2i-1} + x_{2i}, x_{2i} -> l_i x_{2i}; then diagonal tail
    if linear:
        t = 0
        lams = []
        while 2 * t + 1 < n:
            lam, rest = _split_diagonal(phi.images[2 * t], 2 * t)
            lam2, rest2 = _split_diagonal(phi.images[2 * t + 1], 2 * t + 1)
            if rest == gens[2 * t + 1] and not rest2 and lam == lam2:
                lams.append(lam)
                t += 1
            else:
                break
        if t >= 1:
            tail = []
            ok = True
            for s in range(2 * t, n):
                lam, rest = _split_diagonal(phi.images[s], s)
                if rest:
                    ok = False
                    break
                tail.append(lam)
            if ok:
                if n == 2 * t:
                    form = 1
                elif n == 2 * t + 1:
                    form = 2
                else:
                    form = 3
                return MapShape("jordan-pairs", "ederivation",
                                {"t": t, "lambdas": lams, "tail": tail, "form": form},
                                linear, affine)

    # triangular: x_i -> l_i x_i + f_i(x_{i+1}, ..., x_n)
    lams, tails = [], []
    triangular = True
    for i, img in enumerate(phi.images):
        lam, rest = _split_diagonal(img, i)
        if any(any(m[:i + 1]) for m in rest.terms):
            triangular = False
            break
        lams.append(lam)
        tails.append(rest)
    if triangular:
        diagonal = all(f.degree() <= 0 for f in tails)
        return MapShape("triangular", "ederivation",
                        {"lambdas": lams, "tails": tails, "diagonal": diagonal},
                        linear, affine)
    if linear:
        return MapShape("linear", "ederivation", {"matrix": phi.matrix()}, True, True)
    if affine:
        A, c = phi.linear_part()
        return MapShape("affine", "ederivation", {"matrix": A, "translation": c}, False, True)
    return MapShape("general", "ederivation", {"map": delta}, False, False)


def _classify_derivation(D: Derivation) -> MapShape:
    ring = D.ring
    grading = D.grading
    linear, affine = grading == "graded", grading in ("graded", "filtered")
    a_list, b_list = [], []
    diagonal = True
    triangular = True
    for i, c in enumerate(D.coeffs):
        a, rest = _split_diagonal(c, i)
        if rest.degree() > 0:
            diagonal = False
        if any(any(m[i:]) for m in rest.terms):
            triangular = False
        a_list.append(a)
        b_list.append(rest)
    if diagonal:
        return MapShape("derivation-affine", "derivation", {"a": a_list, "b": b_list}, linear, affine)
    if triangular:
        return MapShape("derivation-triangular", "derivation", {"a": a_list, "b": b_list}, linear, affine)
    return MapShape("general", "derivation", {"map": D}, linear, affine)


def classify(mapping) -> MapShape:
    """Most specific hypothesis shape matched in the given coordinates."""
    if isinstance(mapping, Endomorphism):
        mapping = EDerivation(mapping)
    if isinstance(mapping, EDerivation):
        return _classify_endo(mapping)
    if isinstance(mapping, Derivation):
        return _classify_derivation(mapping)
    raise TypeError(f"cannot classify {type(mapping).__name__}")
