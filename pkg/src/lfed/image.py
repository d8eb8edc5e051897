"""Degree-truncated images of E-derivations and derivations.

Two regimes:

* degree-preserving maps (phi linear, or D with linear coefficients) send
  each homogeneous component V_e into itself, so Im(delta) meets V_e in
  exactly delta(V_e).  Slices are computed per block-multidegree, where
  the blocks are the connected components of the variable coupling of
  the map; non-membership is certified.
* every other map gets the span of {delta(m) : deg m <= d + slack}
  intersected with V_{<=d}.  That space contains delta(V_{<=d}) and sits
  inside Im(delta), so "in" is exact but a negative answer only means
  "not found within the slack".
"""
from __future__ import annotations

import os
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .maps import Derivation, EDerivation, Endomorphism
from .polyring import Polynomial, grlex_key, monomials_of_degree, monomials_up_to
from .scalar import root_of_unity_order

__all__ = [
    "Echelon",
    "ImageBasis",
    "MembershipVerdict",
    "SliceReport",
    "image_basis",
    "member",
    "ideal_slice_test",
    "compare_images",
    "default_slack",
    "ideal_slice",
    "thread_count",
]

IN = "in"
NOT_IN = "not-in-certified"
NOT_FOUND = "not-found-within-slack"


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("LFED_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# sparse reduced echelon form

class Echelon:
    """Incremental reduced row echelon form of sparse vectors.

    Vectors are dicts monomial -> coefficient.  The pivot of a row is its
    largest monomial in graded-lex order; rows are scaled so the pivot
    coefficient is 1 and no pivot occurs in any other row.  With
    ``track=True`` every row carries a witness: a combination of the
    labels passed to :meth:`add` whose image is the row.
    """

    def __init__(self, track: bool = True):
        self.rows = {}
        self.witness = {}
        self.track = track

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict):
        """Return (residue, combination) with vec = residue + sum c_p row_p."""
        vec = dict(vec)
        combo = {}
        rows = self.rows
        for m in [m for m in vec if m in rows]:
            c = vec.get(m)
            if not c:
                continue
            combo[m] = c
            for mm, rc in rows[m].items():
                v = vec.get(mm)
                if v is None:
                    vec[mm] = -c * rc
                else:
                    v = v - c * rc
                    if v:
                        vec[mm] = v
                    else:
                        del vec[mm]
        return vec, combo

    def combine_witness(self, combo: dict) -> dict:
        out = {}
        for p, c in combo.items():
            for label, w in self.witness[p].items():
                v = out.get(label)
                v = w * c if v is None else v + w * c
                if v:
                    out[label] = v
                else:
                    out.pop(label, None)
        return out

    def add(self, vec: dict, label=None) -> bool:
        """Insert a vector; returns True if the rank grew."""
        residue, combo = self.reduce(vec)
        if not residue:
            return False
        pivot = max(residue, key=grlex_key)
        inv = 1 / residue[pivot]
        row = {m: c * inv for m, c in residue.items()}
        wit = None
        if self.track:
            wit = {}
            for p, c in combo.items():
                for lab, w in self.witness[p].items():
                    v = wit.get(lab)
                    v = -w * c if v is None else v - w * c
                    if v:
                        wit[lab] = v
                    else:
                        wit.pop(lab, None)
            v = wit.get(label)
            v = 1 if v is None else v + 1
            if v:
                wit[label] = v
            else:
                wit.pop(label, None)
            wit = {k: c * inv for k, c in wit.items()}
        for p, other in self.rows.items():
            f = other.get(pivot)
            if f is None:
                continue
            for mm, c in row.items():
                v = other.get(mm)
                if v is None:
                    other[mm] = -f * c
                else:
                    v = v - f * c
                    if v:
                        other[mm] = v
                    else:
                        del other[mm]
            if self.track:
                ow = self.witness[p]
                for lab, c in wit.items():
                    v = ow.get(lab)
                    if v is None:
                        ow[lab] = -f * c
                    else:
                        v = v - f * c
                        if v:
                            ow[lab] = v
                        else:
                            del ow[lab]
        self.rows[pivot] = row
        if self.track:
            self.witness[pivot] = wit
        return True

    def pivots(self):
        return sorted(self.rows, key=grlex_key, reverse=True)


# ---------------------------------------------------------------------------
# per-map engine

def _blocks(mapping):
    """Connected components of the variable coupling of a degree-preserving map."""
    n = mapping.ring.n
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    polys = mapping.phi.images if isinstance(mapping, EDerivation) else mapping.coeffs
    for i, p in enumerate(polys):
        for j in p.variables():
            parent[find(i)] = find(j)
    roots = {}
    block_of = []
    for i in range(n):
        r = find(i)
        block_of.append(roots.setdefault(r, len(roots)))
    return block_of, len(roots)


class _Engine:
    def __init__(self, mapping, slack: int):
        self.mapping = mapping
        self.ring = mapping.ring
        K = self.ring.field
        self.K = K
        self.rational = K.degree == 1
        self.grading = mapping.grading
        self.slack = slack
        self.lock = threading.Lock()
        self.slices = {}
        self.filtered = {}
        if self.grading == "graded":
            self.block_of, self.nblocks = _blocks(mapping)

    # coefficient conversion -------------------------------------------------
    def to_vec(self, p: Polynomial) -> dict:
        if self.rational:
            return {m: c.coords[0] for m, c in p.terms.items()}
        return dict(p.terms)

    def to_poly(self, vec: dict) -> Polynomial:
        K = self.K
        return Polynomial(self.ring, {m: K(c) for m, c in vec.items() if c})

    def image_vec(self, m) -> dict:
        return self.to_vec(self.mapping.apply_monomial(m))

    # graded -----------------------------------------------------------------
    def multidegree(self, m):
        out = [0] * self.nblocks
        for i, e in enumerate(m):
            out[self.block_of[i]] += e
        return tuple(out)

    def graded_slice(self, md, track: bool = False) -> Echelon:
        """Echelon of delta(V) in one block-multidegree; ascending insertion keeps rows sparse."""
        hit = self.slices.get((md, True))
        if hit is None and not track:
            hit = self.slices.get((md, False))
        if hit is not None:
            return hit
        ech = Echelon(track=track)
        for m in reversed(monomials_of_degree(self.ring.n, sum(md))):
            if self.multidegree(m) == md:
                ech.add(self.image_vec(m), m)
        with self.lock:
            self.slices.setdefault((md, track), ech)
        return self.slices[(md, track)]

    def degree_multidegrees(self, e):
        seen = []
        for m in monomials_of_degree(self.ring.n, e):
            md = self.multidegree(m)
            if md not in seen:
                seen.append(md)
        return seen

    # filtered ---------------------------------------------------------------
    def filtered_echelon(self, d, track: bool = False) -> Echelon:
        top = d + self.slack
        hit = self.filtered.get((top, True))
        if hit is None and not track:
            hit = self.filtered.get((top, False))
        if hit is not None:
            return hit
        ech = Echelon(track=track)
        for m in reversed(monomials_up_to(self.ring.n, top)):
            ech.add(self.image_vec(m), m)
        with self.lock:
            self.filtered.setdefault((top, track), ech)
        return self.filtered[(top, track)]


_ENGINES: "OrderedDict" = OrderedDict()
_ENGINE_LOCK = threading.Lock()


def _engine(mapping, slack=None) -> _Engine:
    if isinstance(mapping, Endomorphism):
        mapping = EDerivation(mapping)
    if mapping.grading == "graded":
        slack = 0
    elif slack is None:
        slack = default_slack(mapping)
    key = (mapping, slack)
    with _ENGINE_LOCK:
        eng = _ENGINES.get(key)
        if eng is None:
            eng = _Engine(mapping, slack)
            _ENGINES[key] = eng
            while len(_ENGINES) > 32:
                _ENGINES.popitem(last=False)
        else:
            _ENGINES.move_to_end(key)
    return eng


def default_slack(mapping) -> int:
    """2*s*n with s the largest finite root-of-unity order among eigenvalues, else 2n."""
    from .normalize import linear_eigenvalues

    n = mapping.ring.n
    if isinstance(mapping, Derivation):
        return 2 * n
    eigen = linear_eigenvalues(mapping) or []
    orders = [o for o in (root_of_unity_order(lam) for lam in eigen) if o]
    return 2 * max(orders) * n if orders else 2 * n


# ---------------------------------------------------------------------------
# public types

@dataclass
class ImageBasis:
    """Reduced echelon bases of the image, per degree or per filtration level."""

    map_kind: str
    grading: str
    degree: int
    slack: int
    exact: bool
    bases: dict = dc_field(default_factory=dict)

    def dimension(self, e: int) -> int:
        return len(self.bases.get(e, ()))

    def summary(self) -> dict:
        return {
            "map_kind": self.map_kind,
            "grading": self.grading,
            "degree": self.degree,
            "slack": self.slack,
            "exact": self.exact,
            "dimensions": {str(e): len(b) for e, b in sorted(self.bases.items())},
            "bases": {str(e): [str(p) for p in b] for e, b in sorted(self.bases.items())},
        }


@dataclass
class MembershipVerdict:
    status: str
    residue: Polynomial
    witness: Polynomial | None = None
    slack: int = 0

    @property
    def is_in(self) -> bool:
        return self.status == IN

    def summary(self) -> dict:
        return {
            "status": self.status,
            "residue": str(self.residue),
            "witness": None if self.witness is None else str(self.witness),
            "slack": self.slack,
        }


@dataclass
class SliceReport:
    passed: bool
    degrees_checked: list
    first_failure: int | None = None
    detail: str = ""
    exact: bool = True

    def summary(self) -> dict:
        return {
            "passed": self.passed,
            "degrees_checked": self.degrees_checked,
            "first_failure": self.first_failure,
            "detail": self.detail,
            "exact": self.exact,
        }


def _as_map(mapping):
    return EDerivation(mapping) if isinstance(mapping, Endomorphism) else mapping


def _rows_as_polys(eng, ech: Echelon, pivots=None):
    return [eng.to_poly(ech.rows[p]) for p in (pivots or ech.pivots())]


def image_basis(mapping, d: int, slack: int | None = None) -> ImageBasis:
    """Echelon bases of Im(map) meeting V_e (graded) or V_{<=e} (otherwise), e <= d."""
    if d < 0:
        raise ValueError("degree bound must be >= 0")
    mapping = _as_map(mapping)
    eng = _engine(mapping, slack)
    bases = {}
    if eng.grading == "graded":
        jobs = [md for e in range(d + 1) for md in eng.degree_multidegrees(e)]
        workers = thread_count()
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                list(pool.map(eng.graded_slice, jobs))
        for e in range(d + 1):
            rows = {}
            for md in eng.degree_multidegrees(e):
                rows.update(eng.graded_slice(md).rows)
            order = sorted(rows, key=grlex_key, reverse=True)
            bases[e] = [eng.to_poly(rows[p]) for p in order]
        exact = True
    else:
        ech = eng.filtered_echelon(d)
        for e in range(d + 1):
            pivots = [p for p in ech.pivots() if sum(p) <= e]
            bases[e] = _rows_as_polys(eng, ech, pivots)
        exact = False
    return ImageBasis(mapping.kind, eng.grading, d, eng.slack, exact, bases)


def member(mapping, q: Polynomial, d: int | None = None, slack: int | None = None,
           witness: bool = True) -> MembershipVerdict:
    """Decide q in Im(map) within degree d (default: deg q).

    With ``witness=True`` an ``in`` verdict carries a preimage that has
    been re-checked by applying the map.
    """
    mapping = _as_map(mapping)
    eng = _engine(mapping, slack)
    ring = mapping.ring
    if d is None:
        d = max(q.degree(), 0)
    if q.degree() > d:
        raise ValueError(f"query degree {q.degree()} exceeds bound {d}")
    if not q:
        return MembershipVerdict(IN, ring.zero, ring.zero, eng.slack)
    vec = eng.to_vec(q)
    residue = {}
    wit = {}
    if eng.grading == "graded":
        parts = {}
        for m, c in vec.items():
            parts.setdefault(eng.multidegree(m), {})[m] = c
        for md in sorted(parts):
            ech = eng.graded_slice(md)
            res, _ = ech.reduce(parts[md])
            residue.update(res)
        if witness and not residue:
            for md in sorted(parts):
                ech = eng.graded_slice(md, track=True)
                _, combo = ech.reduce(parts[md])
                wit.update(ech.combine_witness(combo))
        miss = NOT_IN
    else:
        ech = eng.filtered_echelon(d)
        residue, _ = ech.reduce(vec)
        if witness and not residue:
            ech = eng.filtered_echelon(d, track=True)
            _, combo = ech.reduce(vec)
            wit = ech.combine_witness(combo)
        miss = NOT_FOUND
    res_poly = eng.to_poly(residue)
    if residue:
        return MembershipVerdict(miss, res_poly, None, eng.slack)
    if not witness:
        return MembershipVerdict(IN, res_poly, None, eng.slack)
    wit_poly = eng.to_poly(wit)
    if mapping(wit_poly) != q:
        raise AssertionError("witness does not reproduce the query")  # pragma: no cover
    return MembershipVerdict(IN, res_poly, wit_poly, eng.slack)


def ideal_slice(generators, e: int, graded: bool):
    """Echelon of the ideal (generators) meeting V_e (graded) or V_{<=e}.

    Spanned by g*m over monomials m with the product in range; this is the
    exact slice for homogeneous generators or a single generator.
    """
    generators = [g for g in generators if g]
    ech = Echelon(track=False)
    if not generators:
        return ech
    ring = generators[0].ring
    rational = ring.field.degree == 1
    for g in generators:
        dg = g.degree()
        if graded:
            mons = monomials_of_degree(ring.n, e - dg) if e >= dg else ()
        else:
            mons = monomials_up_to(ring.n, e - dg) if e >= dg else ()
        for m in mons:
            p = g * ring.monomial(m)
            if graded:
                p = p.homogeneous_component(e)
            ech.add({mm: (c.coords[0] if rational else c) for mm, c in p.terms.items()})
    return ech


def _same_space(a: Echelon, b: Echelon) -> bool:
    if set(a.rows) != set(b.rows):
        return False
    return all(a.rows[p] == b.rows[p] for p in a.rows)


def _difference(eng, a: Echelon, b: Echelon):
    """A row of a outside span b, as a polynomial, or None."""
    for p in a.pivots():
        res, _ = b.reduce(a.rows[p])
        if res:
            return eng.to_poly(a.rows[p])
    return None


def _graded_echelon(eng, e):
    ech = Echelon(track=False)
    for md in eng.degree_multidegrees(e):
        ech.rows.update(eng.graded_slice(md).rows)
    return ech


def ideal_slice_test(mapping, generators, d: int, slack: int | None = None) -> SliceReport:
    """Compare the image slices with the ideal slices degree by degree up to d."""
    mapping = _as_map(mapping)
    eng = _engine(mapping, slack)
    graded = eng.grading == "graded"
    if graded and not all(g.is_homogeneous() for g in generators):
        graded_ok = False
    else:
        graded_ok = True
    checked = []
    for e in range(d + 1):
        if graded and graded_ok:
            img = _graded_echelon(eng, e)
            ideal = ideal_slice(generators, e, graded=True)
        else:
            full = eng.filtered_echelon(d) if not graded else None
            if full is None:
                img = Echelon(track=False)
                for k in range(e + 1):
                    img.rows.update(_graded_echelon(eng, k).rows)
            else:
                img = Echelon(track=False)
                img.rows = {p: r for p, r in full.rows.items() if sum(p) <= e}
            ideal = ideal_slice(generators, e, graded=False)
        checked.append(e)
        if not _same_space(img, ideal):
            extra = _difference(eng, img, ideal)
            if extra is not None:
                detail = f"degree {e}: image contains {extra} outside the ideal"
            else:
                detail = f"degree {e}: ideal contains {_difference(eng, ideal, img)} outside the image"
            return SliceReport(False, checked, e, detail, eng.grading == "graded")
    return SliceReport(True, checked, None, "", eng.grading == "graded")


def compare_images(map_a, map_b, d: int, slack: int | None = None) -> SliceReport:
    """Per-degree equality of the image slices of two maps."""
    map_a, map_b = _as_map(map_a), _as_map(map_b)
    ea, eb = _engine(map_a, slack), _engine(map_b, slack)
    graded = ea.grading == "graded" and eb.grading == "graded"
    if not graded and ea.slack != eb.slack:
        raise ValueError("affine comparisons need the same slack for both maps")
    checked = []
    for e in range(d + 1):
        if graded:
            A, B = _graded_echelon(ea, e), _graded_echelon(eb, e)
        else:
            A, B = Echelon(track=False), Echelon(track=False)
            for eng, ech in ((ea, A), (eb, B)):
                if eng.grading == "graded":
                    for k in range(e + 1):
                        ech.rows.update(_graded_echelon(eng, k).rows)
                else:
                    full = eng.filtered_echelon(d)
                    ech.rows = {p: r for p, r in full.rows.items() if sum(p) <= e}
        checked.append(e)
        if not _same_space(A, B):
            extra = _difference(ea, A, B)
            if extra is not None:
                detail = f"degree {e}: first image contains {extra}, second does not"
            else:
                detail = f"degree {e}: second image contains {_difference(eb, B, A)}, first does not"
            return SliceReport(False, checked, e, detail, graded)
    return SliceReport(True, checked, None, "", graded)
