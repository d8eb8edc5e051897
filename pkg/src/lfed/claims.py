"""Registered claim batteries: degree-bounded exact checks of each numbered result.

Each battery validates its hypotheses first.  A failed hypothesis raises
:class:`HypothesisError` unless ``override=True``, in which case the run
continues and the report is marked exploratory.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

from gmpy2 import mpq

from ._linalg import rref
from .image import IN, NOT_IN, compare_images, ideal_slice_test, image_basis, member
from .maps import (
    Derivation,
    EDerivation,
    Endomorphism,
    PolyAutomorphism,
    classify,
    conjugate,
)
from .mzlab import (
    check_prop27,
    conjecture45_explore,
    in_conjectured_space,
    mz_spot_check,
    radical_scan,
    triple_jordan,
)
from .normalize import (
    NormalizationError,
    ResonantObstruction,
    linear_eigenvalues,
    linearize_triangular_derivation,
    normalize_affine_dim2,
    shift_to_origin,
)
from .parser import parse_scalar
from .polyring import PolyRing, monomial_str, monomials_of_degree
from .scalar import field, resonance, root_of_unity_order

__all__ = ["ClaimReport", "Check", "HypothesisError", "CLAIMS", "verify_claim", "claim_ids"]


class HypothesisError(ValueError):
    """Parameters fall outside the claim's hypotheses."""

    def __init__(self, claim: str, hypothesis: str, detail: str):
        self.claim = claim
        self.hypothesis = hypothesis
        self.detail = detail
        super().__init__(f"{claim}: hypothesis '{hypothesis}' violated: {detail}")


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    payload: dict | None = None

    def summary(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if self.payload is not None:
            out["payload"] = self.payload
        return out


@dataclass
class ClaimReport:
    claim: str
    params: dict
    exploratory: bool
    hypotheses: list = dc_field(default_factory=list)
    checks: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def summary(self) -> dict:
        return {
            "claim": self.claim,
            "params": self.params,
            "exploratory": self.exploratory,
            "passed": self.passed,
            "hypotheses": self.hypotheses,
            "checks": [c.summary() for c in self.checks],
        }


class _Run:
    def __init__(self, claim: str, params: dict, override: bool):
        self.claim = claim
        self.params = params
        self.override = override
        self.exploratory = False
        self.hypotheses = []
        self.checks = []

    def __getitem__(self, key):
        return self.params[key]

    @property
    def K(self):
        return field(int(self.params["N"]))

    def scalar(self, value):
        if isinstance(value, float):
            raise ValueError(f"floating-point scalar {value!r}; use a rational such as '1/2'")
        return parse_scalar(str(value), PolyRing(1, self.K))

    def scalars(self, values):
        return [self.scalar(v) for v in values]

    def matrix(self, rows):
        return [self.scalars(r) for r in rows]

    def require(self, name: str, ok: bool, detail: str = ""):
        self.hypotheses.append({"name": name, "holds": bool(ok), "detail": detail})
        if not ok:
            if not self.override:
                raise HypothesisError(self.claim, name, detail)
            self.exploratory = True

    def check(self, name: str, passed: bool, detail: str = "", payload: dict | None = None):
        self.checks.append(Check(name, bool(passed), detail, payload))


CLAIMS: dict = {}


def _claim(cid: str, defaults: dict, summary: str):
    def register(fn):
        CLAIMS[cid] = (fn, dict(defaults), summary)
        return fn
    return register


def claim_ids() -> list:
    return list(CLAIMS)


def _normalize_params(defaults: dict, params: dict) -> dict:
    unknown = sorted(set(params) - set(defaults))
    if unknown:
        raise ValueError(f"unknown parameter(s) {', '.join(unknown)}; accepted: {', '.join(sorted(defaults))}")
    out = dict(defaults)
    out.update(params)
    return out


def verify_claim(cid: str, params: dict | None = None, override: bool = False) -> ClaimReport:
    """Run the battery registered under ``cid`` and return its report."""
    if cid not in CLAIMS:
        raise ValueError(f"unknown claim {cid!r}; registered: {', '.join(CLAIMS)}")
    fn, defaults, _ = CLAIMS[cid]
    resolved = _normalize_params(defaults, dict(params or {}))
    run = _Run(cid, resolved, override)
    fn(run)
    if not run.checks:
        raise RuntimeError(f"claim {cid} ran no checks")
    # JSON round trip gives a plain, deterministic parameter record
    shown = json.loads(json.dumps(resolved, default=str, sort_keys=True))
    return ClaimReport(cid, shown, run.exploratory, run.hypotheses, run.checks)


# ---------------------------------------------------------------------------
# helpers

def _endo(ring: PolyRing, polys) -> EDerivation:
    return EDerivation(Endomorphism(ring, list(polys)))


def _jordan_pairs(ring: PolyRing, pair_lambdas, tail_lambdas=()) -> EDerivation:
    xs = ring.gens()
    images = []
    for i, lam in enumerate(pair_lambdas):
        a, b = xs[2 * i], xs[2 * i + 1]
        images += [a.scalar_mul(lam) + b, b.scalar_mul(lam)]
    for j, lam in enumerate(tail_lambdas):
        images.append(xs[2 * len(pair_lambdas) + j].scalar_mul(lam))
    return _endo(ring, images)


def _power_product(lambdas, exps):
    out = lambdas[0].field.one
    for lam, e in zip(lambdas, exps):
        if e:
            out = out * lam ** e
    return out


def _table(run: _Run, name: str, mapping, d: int, rule, lo: int = 0, limit: int = 20):
    """Membership of every monomial of degree lo..d against rule(m) -> bool | None."""
    n = mapping.ring.n
    ring = mapping.ring
    tested = 0
    bad = []
    for e in range(lo, d + 1):
        for m in reversed(monomials_of_degree(n, e)):
            expect = rule(m)
            if expect is None:
                continue
            tested += 1
            status = member(mapping, ring.monomial(m), witness=False).status
            ok = status == IN if expect else status == NOT_IN
            if not ok:
                bad.append({"monomial": monomial_str(m), "expected": IN if expect else NOT_IN,
                            "found": status})
    run.check(name, not bad,
              f"{tested} monomials of degree {lo}..{d}, {len(bad)} discrepancies",
              {"tested": tested, "discrepancies": bad[:limit]})
    return not bad


def _ideal(run: _Run, name: str, mapping, gens, d: int, slack=None):
    rep = ideal_slice_test(mapping, gens, d, slack)
    gens_s = ", ".join(str(g) for g in gens)
    detail = f"image slices equal ideal ({gens_s}) slices for degrees 0..{d}"
    if not rep.passed:
        detail = rep.detail
    elif not rep.exact:
        detail += " (filtered, within slack)"
    run.check(name, rep.passed, detail, rep.summary())
    return rep.passed


def _one_not_in(run: _Run, mapping):
    v = member(mapping, mapping.ring.one, witness=False)
    run.check("one-not-in-image", v.status == NOT_IN if mapping.grading == "graded" else v.status != IN,
              f"1: {v.status}")


def _one_in(run: _Run, mapping):
    v = member(mapping, mapping.ring.one)
    run.check("one-in-image", v.status == IN,
              f"1: {v.status}" + (f", witness {v.witness}" if v.witness is not None else ""),
              v.summary())


def _spot(run: _Run, name: str, mapping, d: int, M: int, B: int, candidates=None):
    rep = mz_spot_check(mapping, d, M, B, candidates)
    detail = (f"{len(rep.premise)} premise elements, {rep.pairs_checked} products b*a^m checked, "
              f"{len(rep.violations)} violations")
    if rep.notes:
        detail += "; " + "; ".join(rep.notes)
    run.check(name, rep.passed, detail, rep.summary())


def _non_resonance(run: _Run, lambdas, name="non-resonance"):
    res = resonance(lambdas)
    if res.exists:
        lam_s = ", ".join(str(x) for x in lambdas)
        run.require(name, False,
                    f"eigenvalues ({lam_s}) satisfy prod lambda^i = 1 for i = {list(res.witness)}; "
                    "the claim requires no such relation")
    else:
        how = "certified" if res.certified else "no relation up to the search bound"
        run.require(name, True, how)


def _covariance(run: _Run, original, normalized, sigma, d: int):
    """Im(original) = sigma(Im(normalized)) slice by slice, for linear sigma and graded maps."""
    bad = None
    for e in range(d + 1):
        basis = image_basis(normalized, e).bases[e]
        orig_dim = image_basis(original, e).dimension(e)
        if len(basis) != orig_dim:
            bad = f"degree {e}: dimensions {len(basis)} vs {orig_dim}"
            break
        for p in basis:
            q = sigma.forward(p)
            if member(original, q, witness=False).status != IN:
                bad = f"degree {e}: sigma({p}) = {q} not in the original image"
                break
        if bad:
            break
    run.check("image-covariance", bad is None,
              bad or f"Im(delta) = sigma(Im(normalized)) on degrees 0..{d}")


# ---------------------------------------------------------------------------
# section 2 results

@_claim("thm2.1", {"N": 1, "degree": 6, "matrix": None, "lambda": None},
        "linear triangularizable phi without eigenvalue resonance: Im delta = (x1..xn)")
def _thm21(run: _Run):
    K = run.K
    if run["lambda"] is not None:
        lam = run.scalar(run["lambda"])
        mats = [[[lam, K.one], [K.zero, lam]]]
    elif run["matrix"] is not None:
        mats = [run.matrix(run["matrix"])]
    else:
        mats = [run.matrix([[2, 1], [0, 2]]), run.matrix([[2, 1, 0], [0, 3, 1], [0, 0, 5]])]
    d = int(run["degree"])
    for idx, A in enumerate(mats):
        n = len(A)
        ring = PolyRing(n, K)
        delta = EDerivation(Endomorphism.from_matrix(ring, A))
        eig = linear_eigenvalues(delta)
        run.require("eigenvalues-in-field", eig is not None,
                    "characteristic roots found" if eig is not None else
                    f"cannot triangularize the matrix over Q(z_{K.N})")
        if eig is None:
            continue
        _non_resonance(run, eig)
        tag = f"[{idx}]" if len(mats) > 1 else ""
        basis = image_basis(delta, d)
        dims = {e: basis.dimension(e) for e in range(d + 1)}
        full = {e: comb(e + n - 1, n - 1) if e else 0 for e in range(d + 1)}
        run.check(f"slices-full{tag}", dims == full,
                  f"n={n}: image dimensions {[dims[e] for e in range(d + 1)]} vs {[full[e] for e in range(d + 1)]}",
                  {"dimensions": dims, "expected": full})
        _ideal(run, f"ideal-of-variables{tag}", delta, ring.gens(), d)
        v = member(delta, ring.one, witness=False)
        run.check(f"one-not-in-image{tag}", v.status == NOT_IN, f"1: {v.status}")


@_claim("prop2.3", {"N": 1, "degree": 4, "images": ["2*x1 + x2^2 + 1", "3*x2 + 1"], "slack": None},
        "triangular phi without resonance: Im delta is the ideal generated by the variables")
def _prop23(run: _Run):
    images = list(run["images"])
    ring = PolyRing(len(images), run.K)
    delta = _endo(ring, [ring.parse(s) for s in images])
    shape = classify(delta)
    run.require("triangular-shape", shape.kind in ("triangular", "jordan-pairs"),
                f"classified as {shape.kind}")
    if shape.kind not in ("triangular", "jordan-pairs"):
        run.check("shape", False, f"cannot run the battery on a {shape.kind} map")
        return
    lambdas = _shape_lambdas(shape)
    _non_resonance(run, lambdas)
    d = int(run["degree"])
    slack = run["slack"]
    try:
        res = shift_to_origin(delta)
    except NormalizationError as exc:
        run.check("shift-to-origin", False, str(exc))
        return
    normalized = res.normalized
    consts = [normalized.phi.images[i].constant_term() for i in range(ring.n)]
    run.check("shift-to-origin", all(c.is_zero() for c in consts),
              f"normalized constants {[str(c) for c in consts]}", res.summary())
    _ideal(run, "normalized-image-is-ideal", normalized, ring.gens(), d, slack)
    gens = [res.sigma.forward.images[i] for i in range(ring.n)]
    _ideal(run, "image-is-ideal", delta, gens, d, slack)


def _shape_lambdas(shape):
    p = shape.params
    if shape.kind == "jordan-pairs":
        lams = []
        for lam in p["lambdas"]:
            lams += [lam, lam]
        return lams + list(p.get("tail", []))
    return list(p["lambdas"])


@_claim("prop2.4", {"N": 2, "degree": 6, "lambdas": ["2", "-1"], "mus": ["1", "1"],
                    "power_bound": 6, "multiplier_degree": 1},
        "diagonal affine phi: Im delta is a Mathieu-Zhao space")
def _prop24(run: _Run):
    lams = run.scalars(run["lambdas"])
    mus = run.scalars(run["mus"])
    if len(lams) != len(mus):
        raise ValueError("lambdas and mus need the same length")
    ring = PolyRing(len(lams), run.K)
    xs = ring.gens()
    delta = _endo(ring, [x.scalar_mul(l) + ring.const(m) for x, l, m in zip(xs, lams, mus)])
    run.require("diagonal-affine-shape", True, "built from (lambda_i, mu_i)")
    d, M, B = int(run["degree"]), int(run["power_bound"]), int(run["multiplier_degree"])
    if any(l == 1 and m for l, m in zip(lams, mus)):
        _one_in(run, delta)
        return
    shifts = [(m / (l - 1)) if l != 1 else run.K.zero for l, m in zip(lams, mus)]
    sigma = PolyAutomorphism.translation(ring, shifts)
    normalized = conjugate(delta, sigma)
    target = _endo(ring, [x.scalar_mul(l) for x, l in zip(xs, lams)])
    run.check("conjugate-is-diagonal", normalized == target,
              f"sigma^-1 delta sigma = {normalized.definition()}")
    _table(run, "diagonal-membership", normalized, d,
           lambda m: _power_product(lams, m) != 1)
    _spot(run, "mz-spot-check", normalized, 2, M, B)


@_claim("prop2.5", {"N": 1, "degree": 6, "a": ["1", "2"], "b": ["1", "3"],
                    "power_bound": 6, "multiplier_degree": 1},
        "affine derivation: Im D is a Mathieu-Zhao space")
def _prop25(run: _Run):
    a = run.scalars(run["a"])
    b = run.scalars(run["b"])
    if len(a) != len(b):
        raise ValueError("a and b need the same length")
    ring = PolyRing(len(a), run.K)
    xs = ring.gens()
    D = Derivation(ring, [x.scalar_mul(ai) + ring.const(bi) for x, ai, bi in zip(xs, a, b)])
    run.require("affine-derivation-shape", True, "built from (a_i, b_i)")
    d, M, B = int(run["degree"]), int(run["power_bound"]), int(run["multiplier_degree"])
    if any(ai == 0 and bi for ai, bi in zip(a, b)):
        _one_in(run, D)
        return
    fwd = [x.scalar_mul(ai) + ring.const(bi) if ai else x for x, ai, bi in zip(xs, a, b)]
    inv = [(x - ring.const(bi)).scalar_mul(ai.inverse()) if ai else x for x, ai, bi in zip(xs, a, b)]
    sigma = PolyAutomorphism(Endomorphism(ring, fwd), Endomorphism(ring, inv))
    normalized = conjugate(D, sigma)
    target = Derivation(ring, [x.scalar_mul(ai) for x, ai in zip(xs, a)])
    run.check("conjugate-is-diagonal", normalized == target,
              f"sigma^-1 D sigma = {normalized.definition()}")
    _table(run, "diagonal-membership", normalized, d,
           lambda m: sum((ai * e for ai, e in zip(a, m)), run.K.zero) != 0)
    _spot(run, "mz-spot-check", normalized, 2, M, B)


def _rational_rank(scalars) -> int:
    rows = [list(s.coords) for s in scalars]
    if not rows:
        return 0
    _, pivots = rref([[mpq(c) for c in r] for r in rows], len(rows[0]))
    return len(pivots)


@_claim("prop2.6", {"N": 5, "degree": 6, "filtered_degree": 2,
                    "coeffs": ["x1", "z*x2 + x1^2", "z^2*x3 + x1*x2 + 2"], "slack": None},
        "triangular derivation with S empty: Im D is an ideal")
def _prop26(run: _Run):
    coeffs = list(run["coeffs"])
    ring = PolyRing(len(coeffs), run.K)
    D = Derivation(ring, [ring.parse(s) for s in coeffs])
    shape = classify(D)
    run.require("triangular-derivation-shape",
                shape.kind in ("derivation-triangular", "derivation-affine"),
                f"classified as {shape.kind}")
    if shape.kind not in ("derivation-triangular", "derivation-affine"):
        run.check("shape", False, f"cannot run the battery on a {shape.kind} derivation")
        return
    a = list(shape.params["a"])
    rank = _rational_rank(a)
    run.require("no-integral-relation", rank == len(a),
                f"a = ({', '.join(str(x) for x in a)}) has rational rank {rank} of {len(a)}; "
                "sum a_i y_i = 0 has nonzero integral solutions" if rank < len(a) else
                "a_i are linearly independent over Q, so sum a_i y_i = 0 forces y = 0")
    try:
        res = linearize_triangular_derivation(D)
    except ResonantObstruction as exc:
        run.check("linearization", False, str(exc))
        return
    except NormalizationError as exc:
        run.check("linearization", False, str(exc))
        return
    target = Derivation(ring, [x.scalar_mul(ai) for x, ai in zip(ring.gens(), a)])
    run.check("linearization", res.normalized == target,
              f"sigma^-1 D sigma = {res.normalized.definition()}", res.summary())
    d = int(run["degree"])
    _ideal(run, "normalized-image-is-ideal", res.normalized, ring.gens(), d)
    # Im D = sigma((x)) is the maximal ideal of the zero p of sigma(x_1..x_n)
    point = []
    for k in range(ring.n):
        img = res.sigma.forward.images[k]
        partial = img.evaluate(point + [ring.field.zero] * (ring.n - k))
        a_k = img.coefficient(tuple(int(i == k) for i in range(ring.n)))
        point.append(-(partial / a_k))
    gens = [x - ring.const(p) for x, p in zip(ring.gens(), point)]
    vanish = all(res.sigma.forward.images[k].evaluate(point).is_zero() for k in range(ring.n))
    run.check("common-zero", vanish, f"sigma(x) vanishes at ({', '.join(str(p) for p in point)})")
    _ideal(run, "image-is-ideal", D, gens, int(run["filtered_degree"]), run["slack"])


@_claim("prop2.7", {"N": 3, "degree": 4, "images": ["z*x1 + x2", "z*x2"], "candidates": ["x2"],
                    "power_bound": 6, "multiplier_degree": 1},
        "radical inside M and an ideal implies M is Mathieu-Zhao")
def _prop27(run: _Run):
    images = list(run["images"])
    ring = PolyRing(len(images), run.K)
    delta = _endo(ring, [ring.parse(s) for s in images])
    cands = [ring.parse(c) for c in run["candidates"]]
    d, M, B = int(run["degree"]), int(run["power_bound"]), int(run["multiplier_degree"])
    rep = check_prop27(delta, d, M, candidates=cands)
    failed = [c for c in rep.checks if not c["passed"]]
    run.require("radical-inside-image-and-ideal", rep.satisfied,
                "; ".join(c["detail"] for c in failed) or "satisfied at bound")
    run.check("sufficient-condition", rep.satisfied, rep.status, rep.summary())
    _spot(run, "mz-spot-check", delta, d, M, B, candidates=rep.scan.evidence())


# ---------------------------------------------------------------------------
# section 3 results

def _jordan_rule(pair_lambdas, tail_lambdas):
    """Expected membership for Jordan pairs plus diagonal tail.

    Monomials divisible by an even-indexed pair variable are in; the rest
    are in iff their eigenvalue product differs from 1.
    """
    t = len(pair_lambdas)
    diag = list(pair_lambdas) + list(tail_lambdas)

    def rule(m):
        if any(m[2 * i + 1] for i in range(t)):
            return True
        exps = [m[2 * i] for i in range(t)] + list(m[2 * t:])
        if not any(exps):
            return False
        return _power_product(diag, exps) != 1
    return rule


def _thm31(run: _Run, pair_lambdas, tail_lambdas):
    K = run.K
    n = 2 * len(pair_lambdas) + len(tail_lambdas)
    ring = PolyRing(n, K)
    delta = _jordan_pairs(ring, pair_lambdas, tail_lambdas)
    shape = classify(delta)
    run.require("jordan-pair-shape", shape.kind == "jordan-pairs", f"classified as {shape.kind}")
    d, M, B = int(run["degree"]), int(run["power_bound"]), int(run["multiplier_degree"])
    xs = ring.gens()
    ideal_gens = [xs[2 * i + 1] for i in range(len(pair_lambdas))]
    bad = None
    for e in range(1, d + 1):
        for m in monomials_of_degree(n, e):
            if any(m[2 * i + 1] for i in range(len(pair_lambdas))):
                if member(delta, ring.monomial(m), witness=False).status != IN:
                    bad = monomial_str(m)
                    break
        if bad:
            break
    run.check("pair-ideal-inside-image", bad is None,
              bad and f"{bad} not in the image" or
              f"({', '.join(str(g) for g in ideal_gens)}) inside Im delta up to degree {d}")
    _table(run, "quotient-membership", delta, d, _jordan_rule(pair_lambdas, tail_lambdas))
    _spot(run, "mz-spot-check", delta, 1, M, B)


@_claim("thm3.1.1", {"N": 3, "degree": 5, "lambdas": ["z", "2"], "power_bound": 4, "multiplier_degree": 1},
        "n = 2r Jordan pairs: Im delta is Mathieu-Zhao")
def _thm311(run: _Run):
    _thm31(run, run.scalars(run["lambdas"]), [])


@_claim("thm3.1.2", {"N": 3, "degree": 6, "lambdas": ["z"], "tail": "z^2",
                     "power_bound": 4, "multiplier_degree": 1},
        "n = 2r + 1 Jordan pairs plus one diagonal variable")
def _thm312(run: _Run):
    _thm31(run, run.scalars(run["lambdas"]), [run.scalar(run["tail"])])


@_claim("thm3.1.3", {"N": 2, "degree": 5, "lambdas": ["-1"], "tail": ["2", "1/2"],
                     "power_bound": 4, "multiplier_degree": 1},
        "t Jordan pairs plus a diagonal tail")
def _thm313(run: _Run):
    pairs = run.scalars(run["lambdas"])
    run.require("at-least-one-pair", len(pairs) >= 1, f"t = {len(pairs)}")
    _thm31(run, pairs, run.scalars(run["tail"]))


@_claim("prop3.2", {"N": 1, "degree": 6, "matrix": [[1, 1], [-1, 3]], "power_bound": 4,
                    "multiplier_degree": 1},
        "linear phi in two variables: Im delta is Mathieu-Zhao")
def _prop32(run: _Run):
    A = run.matrix(run["matrix"])
    run.require("two-variables", len(A) == 2 and all(len(r) == 2 for r in A), f"{len(A)} x {len(A[0])}")
    ring = PolyRing(2, run.K)
    delta = EDerivation(Endomorphism.from_matrix(ring, A))
    try:
        res = normalize_affine_dim2(delta)
    except NormalizationError as exc:
        run.require("eigenvalues-in-field", False, str(exc))
        run.check("normal-form", False, str(exc))
        return
    run.require("eigenvalues-in-field", True, "triangularized over the field")
    case = res.certificate["case"]
    run.check("normal-form", case in ("diagonal", "jordan"), f"normal form: {case}", res.summary())
    lin = res.normalized.phi.linear_part()[0]
    d, M, B = int(run["degree"]), int(run["power_bound"]), int(run["multiplier_degree"])
    if case == "jordan":
        rule = _jordan_rule([lin[0][0]], [])
    else:
        rule = (lambda lams: lambda m: any(m) and _power_product(lams, m) != 1)([lin[0][0], lin[1][1]])
    _table(run, "normalized-membership", res.normalized, d, rule)
    _covariance(run, delta, res.normalized, res.sigma, d)
    _spot(run, "mz-spot-check", delta, 1, M, B)


@_claim("cor3.3", {"N": 3, "degree": 9, "lambda": "z", "radical_degree": 3, "power_bound": 6},
        "Jordan pair in two variables: Im delta or its radical is an ideal")
def _cor33(run: _Run):
    lam = run.scalar(run["lambda"])
    ring = PolyRing(2, run.K)
    delta = _jordan_pairs(ring, [lam])
    d = int(run["degree"])
    s = root_of_unity_order(lam)
    run.require("jordan-pair-shape", classify(delta).kind == "jordan-pairs", "phi = (l x1 + x2, l x2)")
    if s is None:
        _ideal(run, "image-is-ideal", delta, ring.gens(), d)
        return
    _table(run, "membership-table", delta, d,
           lambda m: (m[1] >= 1 or m[0] % s != 0) if any(m) else False)
    certified = []
    for k in range(s, d + 1, s):
        v = member(delta, ring.monomial((k, 0)), witness=False)
        certified.append({"monomial": f"x1^{k}", "status": v.status})
    run.check("powers-certified-not-in", all(c["status"] == NOT_IN for c in certified),
              ", ".join(f"{c['monomial']}: {c['status']}" for c in certified) or "no multiples of s in range",
              {"certified": certified})
    rd, M = int(run["radical_degree"]), int(run["power_bound"])
    rep = check_prop27(delta, rd, M, candidates=[ring.var(2)])
    run.check("radical-is-ideal-x2", rep.satisfied, rep.status, rep.summary())


@_claim("prop3.4", {"N": 1, "degree": 5, "images": ["x1 + x2 + 1", "x2"], "matrix_T": None,
                    "slack": None, "power_bound": 4, "multiplier_degree": 1},
        "affine phi in two variables: Im delta is Mathieu-Zhao")
def _prop34(run: _Run):
    images = list(run["images"])
    ring = PolyRing(2, run.K)
    run.require("two-variables", len(images) == 2, f"{len(images)} images")
    delta = _endo(ring, [ring.parse(s) for s in images])
    run.require("affine", delta.phi.is_affine(), "phi is affine" if delta.phi.is_affine() else "phi is not affine")
    T = run.matrix(run["matrix_T"]) if run["matrix_T"] is not None else None
    try:
        res = normalize_affine_dim2(delta, T)
    except NormalizationError as exc:
        run.require("eigenvalues-in-field", False, str(exc))
        run.check("normal-form", False, str(exc))
        return
    cert = res.certificate
    case = cert["case"]
    run.check("normal-form", conjugate(delta, res.sigma) == res.normalized,
              f"case {case}; conjugation identity re-checked", res.summary())
    d, M, B = int(run["degree"]), int(run["power_bound"]), int(run["multiplier_degree"])
    if case == "contains-one":
        _one_in(run, delta)
    elif case == "principal-ideal":
        g = res.normalized.ring.parse(cert["generator"])
        _ideal(run, "principal-ideal", res.normalized, [g], d, run["slack"])
        v = member(res.normalized, ring.one, witness=False)
        run.check("one-not-found", v.status != IN, f"1: {v.status}")
    else:
        _spot(run, "mz-spot-check", res.normalized, 1, M, B)


# ---------------------------------------------------------------------------
# section 4 results

def _pool(K):
    pool = []
    for q in (1, 2, mpq(1, 2), 3, mpq(1, 3), 4, mpq(1, 4)):
        for j in range(K.unit_order):
            pool.append(K.unit_root(j) * K(q))
    uniq = []
    for x in pool:
        if x not in uniq:
            uniq.append(x)
    return uniq


@_claim("lemma4.1", {"N": 6, "bound": 6},
        "relations between two eigenvalues force roots of unity")
def _lemma41(run: _Run):
    K = run.K
    bound = int(run["bound"])
    run.require("none", True, "statement is unconditional; checked over a scalar pool")
    pool = _pool(K)
    orders = {i: root_of_unity_order(x) for i, x in enumerate(pool)}
    powers = [[K.one] for _ in pool]
    for i, x in enumerate(pool):
        for _ in range(bound):
            powers[i].append(powers[i][-1] * x)
    premise1 = premise2 = 0
    bad1, bad2 = [], []
    for i, j in combinations(range(len(pool)), 2):
        rels = [(r1, r2) for r1 in range(1, bound + 1) for r2 in range(1, bound + 1)
                if powers[i][r1] * powers[j][r2] == 1]
        if rels and (orders[i] or orders[j]):
            premise1 += 1
            if not (orders[i] and orders[j]):
                bad1.append(f"({pool[i]}, {pool[j]})")
        independent = any(r[0] * t[1] != r[1] * t[0] for r in rels for t in rels)
        if independent:
            premise2 += 1
            if not (orders[i] and orders[j]):
                bad2.append(f"({pool[i]}, {pool[j]})")
    run.check("part1", not bad1 and premise1 > 0,
              f"{premise1} pairs meet the premise, {len(bad1)} counterexamples", {"counterexamples": bad1[:20]})
    run.check("part2", not bad2 and premise2 > 0,
              f"{premise2} pairs meet the premise, {len(bad2)} counterexamples", {"counterexamples": bad2[:20]})


@_claim("lemma4.2", {"N": 3, "n": 3, "lambda": "z", "degree": 6},
        "single Jordan block with root-of-unity eigenvalue")
def _lemma42(run: _Run):
    lam = run.scalar(run["lambda"])
    n = int(run["n"])
    s = root_of_unity_order(lam)
    run.require("lambda-root-of-unity", s is not None, f"order {s}" if s else f"{lam} is not a root of unity")
    ring = PolyRing(n, run.K)
    xs = ring.gens()
    delta = _endo(ring, [xs[i].scalar_mul(lam) + xs[i + 1] for i in range(n - 1)] + [xs[-1].scalar_mul(lam)])
    d = int(run["degree"])

    def last_two(m):
        if any(m[: n - 2]) or m[n - 1] == 0:
            return None
        return True
    _table(run, "last-two-variables", delta, d, last_two, lo=1)
    if s is None:
        return
    _table(run, "non-multiple-degrees", delta, d, lambda m: True if sum(m) % s else None, lo=1)


def _prop43(run: _Run, which: int):
    l1, l2 = run.scalar(run["lambda1"]), run.scalar(run["lambda2"])
    s1, s2 = root_of_unity_order(l1), root_of_unity_order(l2)
    if which == 1:
        run.require("lambda1-root-of-unity", s1 is not None, f"order {s1}")
        run.require("lambda2-not-root-of-unity", s2 is None, "not a root of unity" if s2 is None else f"order {s2}")
    else:
        run.require("lambda1-not-root-of-unity", s1 is None, "not a root of unity" if s1 is None else f"order {s1}")
        run.require("lambda2-root-of-unity", s2 is not None, f"order {s2}")
    ring = PolyRing(3, run.K)
    delta = _jordan_pairs(ring, [l1], [l2])
    d = int(run["degree"])
    if which == 1 and s1:
        rule = lambda m: (m[1] + m[2] >= 1 or m[0] % s1 != 0) if any(m) else False  # noqa: E731
        gens = [ring.var(2), ring.var(3)]
    elif which == 2 and s2:
        rule = lambda m: (m[0] + m[1] >= 1 or m[2] % s2 != 0) if any(m) else False  # noqa: E731
        gens = [ring.var(1), ring.var(2)]
    else:
        rule = _jordan_rule([l1], [l2])
        gens = [ring.var(2), ring.var(3)] if which == 1 else [ring.var(1), ring.var(2)]
    _table(run, "spanning-monomials", delta, d, rule)
    rd, M = int(run["radical_degree"]), int(run["power_bound"])
    scan = radical_scan(delta, rd, M)
    rep = check_prop27(delta, rd, M, candidates=gens, scan=scan)
    evid = rep.checks[1]
    run.check("radical-evidence-equals-ideal", evid["passed"],
              evid["detail"] or f"evidence set = ({', '.join(str(g) for g in gens)}) up to degree {rd}",
              scan.summary()["counts"])
    run.check("sufficient-condition", rep.satisfied, rep.status, rep.summary())


@_claim("prop4.3.1", {"N": 3, "lambda1": "z", "lambda2": "2", "degree": 6, "radical_degree": 4,
                      "power_bound": 6},
        "lambda1 root of unity, lambda2 not: radical is (x2, x3)")
def _prop431(run: _Run):
    _prop43(run, 1)


@_claim("prop4.3.2", {"N": 3, "lambda1": "2", "lambda2": "z", "degree": 6, "radical_degree": 4,
                      "power_bound": 6},
        "lambda1 not a root of unity, lambda2 one: radical is (x1, x2)")
def _prop432(run: _Run):
    _prop43(run, 2)


def _parity_rule(m):
    i1, i2, i3 = m
    if not any(m):
        return False
    return i3 >= i1 if i2 % 2 else i3 >= i1 + 1


@_claim("prop4.4.1", {"N": 1, "degree": 6, "radical_degree": 3, "power_bound": 6},
        "triple Jordan block with lambda = 1: parity rule")
def _prop441(run: _Run):
    ring = PolyRing(3, run.K)
    delta = triple_jordan(ring, 1)
    run.require("lambda-is-one", True, "fixed by the claim")
    _table(run, "parity-rule", delta, int(run["degree"]), _parity_rule)
    _v_in_radical(run, delta)


def _v_in_radical(run: _Run, delta):
    rd, M = int(run["radical_degree"]), int(run["power_bound"])
    scan = radical_scan(delta, rd, M)
    missing = [str(e.candidate) for e in scan.entries
               if in_conjectured_space(next(iter(e.candidate.terms))) and e.verdict != "in-radical-evidence"]
    run.check("v-inside-radical", not missing,
              f"monomials with i3 >= i1 + 1 up to degree {rd}: {len(missing)} without radical evidence",
              {"missing": missing[:20], "counts": scan.summary()["counts"]})


@_claim("prop4.4.2", {"N": 2, "lambda": "-1", "degree": 6, "radical_degree": 3, "power_bound": 6},
        "triple Jordan block with lambda a root of unity other than 1")
def _prop442(run: _Run):
    lam = run.scalar(run["lambda"])
    s = root_of_unity_order(lam)
    run.require("lambda-root-of-unity-not-one", s is not None and s > 1,
                f"order {s}" if s else f"{lam} is not a root of unity")
    ring = PolyRing(3, run.K)
    delta = triple_jordan(ring, lam)
    d = int(run["degree"])
    s = s or 0
    clauses = {"non-multiple": 0, "resonant-in": 0, "resonant-not-in": 0, "unclassified": 0}

    def rule(m):
        if not any(m):
            return False
        if s and sum(m) % s:
            clauses["non-multiple"] += 1
            return True
        if m[2] >= m[0] + 1:
            clauses["resonant-in"] += 1
            return True
        if m[2] <= m[0]:
            clauses["resonant-not-in"] += 1
            return False
        clauses["unclassified"] += 1
        return None
    _table(run, "membership-table", delta, d, rule)
    total = sum(comb(e + 2, 2) for e in range(1, d + 1))
    covered = clauses["non-multiple"] + clauses["resonant-in"] + clauses["resonant-not-in"]
    run.check("clause-coverage", covered == total and not clauses["unclassified"],
              f"{covered} of {total} nonconstant monomials covered", dict(clauses))
    _v_in_radical(run, delta)


@_claim("remark4.6", {"N": 1, "degree": 5, "radical_degree": 2, "power_bound": 5, "multiplier_degree": 2},
        "lambda = 1 triple Jordan block and the derivation (x2 - x3/2)d1 + x3 d2 share images")
def _remark46(run: _Run):
    ring = PolyRing(3, run.K)
    delta = triple_jordan(ring, 1)
    x1, x2, x3 = ring.gens()
    D = Derivation(ring, [x2 - x3.scalar_mul(ring.field.rational(1, 2)), x3, ring.zero])
    run.require("locally-nilpotent", True, "lambda = 1")
    d = int(run["degree"])
    rep = compare_images(delta, D, d)
    run.check("image-equality", rep.passed,
              rep.detail or f"Im delta and Im D agree on degrees 0..{d}", rep.summary())
    rd, M, B = int(run["radical_degree"]), int(run["power_bound"]), int(run["multiplier_degree"])
    cands = [ring.monomial(m) for e in range(1, rd + 1) for m in reversed(monomials_of_degree(3, e))
             if in_conjectured_space(m)]
    _spot(run, "tail-bound-on-v", delta, rd, M, B, candidates=cands)


@_claim("conj4.5-explore", {"N": 1, "lambda": "1", "degree": 4, "power_bound": 6},
        "radical evidence against the conjectured monomial space (exploration)")
def _conj45(run: _Run):
    lam = run.scalar(run["lambda"])
    run.require("none", True, "exploration; V-side containment is implied for every lambda")
    ring = PolyRing(3, run.K)
    rep = conjecture45_explore(ring, lam, int(run["degree"]), int(run["power_bound"]))
    run.check("v-inside-evidence", rep.containment_holds,
              f"{len(rep.v_not_in_evidence)} monomials of V lack evidence; "
              f"{len(rep.evidence_not_in_v)} evidence monomials outside V (open direction)",
              rep.summary())
