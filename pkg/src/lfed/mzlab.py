"""Bounded Mathieu-Zhao experiments: radicals, sufficient conditions, spot checks."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .image import Echelon, IN, NOT_IN, ideal_slice, member
from .maps import EDerivation, Endomorphism
from .polyring import PolyRing, Polynomial, monomial_str, monomials_of_degree

__all__ = [
    "DEFAULT_POWER_DEGREE_CAP",
    "RadicalEntry",
    "RadicalScan",
    "Prop27Report",
    "SpotCheckReport",
    "Conjecture45Report",
    "radical_scan",
    "check_prop27",
    "mz_spot_check",
    "triple_jordan",
    "conjecture45_explore",
]

DEFAULT_POWER_DEGREE_CAP = 40

EVIDENCE = "in-radical-evidence"
EXCLUDED = "excluded"
INCONCLUSIVE = "inconclusive"


def _as_map(mapping):
    return EDerivation(mapping) if isinstance(mapping, Endomorphism) else mapping


def _monomials_between(n: int, lo: int, hi: int):
    out = []
    for e in range(lo, hi + 1):
        out.extend(reversed(monomials_of_degree(n, e)))
    return out


@dataclass
class RadicalEntry:
    candidate: Polynomial
    verdict: str
    tested_powers: list
    failing_powers: list
    truncated: bool = False

    def summary(self) -> dict:
        return {
            "candidate": str(self.candidate),
            "verdict": self.verdict,
            "tested_powers": self.tested_powers,
            "failing_powers": self.failing_powers,
            "truncated": self.truncated,
        }


@dataclass
class RadicalScan:
    degree: int
    power_bound: int
    power_degree_cap: int
    exact: bool
    entries: list = dc_field(default_factory=list)
    notices: list = dc_field(default_factory=list)

    def evidence(self) -> list:
        return [e.candidate for e in self.entries if e.verdict == EVIDENCE]

    def verdict_of(self, candidate: Polynomial) -> str | None:
        for e in self.entries:
            if e.candidate == candidate:
                return e.verdict
        return None

    def summary(self) -> dict:
        counts = {}
        for e in self.entries:
            counts[e.verdict] = counts.get(e.verdict, 0) + 1
        return {
            "degree": self.degree,
            "power_bound": self.power_bound,
            "power_degree_cap": self.power_degree_cap,
            "exact": self.exact,
            "counts": dict(sorted(counts.items())),
            "entries": [e.summary() for e in self.entries],
            "notices": self.notices,
        }


def radical_scan(mapping, d: int, M: int, extra=(), monomials: bool = True,
                 power_degree_cap: int = DEFAULT_POWER_DEGREE_CAP) -> RadicalScan:
    """Test f^m in Im(map) for m = 1..M over monomials f with 1 <= deg f <= d.

    A candidate is ``excluded`` as soon as a power is certified outside the
    image; with a map that is not degree-preserving a missing power is only
    "not found", giving ``inconclusive``.  Powers whose degree exceeds the
    cap are skipped and reported in ``notices``.
    """
    if d < 0 or M < 1:
        raise ValueError("need d >= 0 and M >= 1")
    mapping = _as_map(mapping)
    ring = mapping.ring
    exact = mapping.grading == "graded"
    scan = RadicalScan(d, M, power_degree_cap, exact)
    candidates = []
    if monomials:
        candidates = [ring.monomial(m) for m in _monomials_between(ring.n, 1, d)]
    candidates.extend(p for p in extra if p not in candidates)
    for f in candidates:
        tested, failing = [], []
        truncated = False
        power = ring.one
        unsure = False
        for m in range(1, M + 1):
            power = power * f
            deg = power.degree()
            if deg > power_degree_cap:
                truncated = True
                scan.notices.append(
                    f"{f}: powers m >= {m} skipped (degree {deg} > cap {power_degree_cap})")
                break
            verdict = member(mapping, power, witness=False)
            tested.append(m)
            if verdict.status == IN:
                continue
            failing.append(m)
            if verdict.status == NOT_IN:
                break
            unsure = True
        if failing and not unsure:
            status = EXCLUDED
        elif failing:
            status = INCONCLUSIVE
        else:
            status = EVIDENCE
        scan.entries.append(RadicalEntry(f, status, tested, failing, truncated))
    return scan


# ---------------------------------------------------------------------------
# sufficient condition: r(M) inside M and r(M) an ideal

@dataclass
class Prop27Report:
    status: str
    checks: list = dc_field(default_factory=list)
    candidates: list = dc_field(default_factory=list)
    scan: RadicalScan | None = None

    @property
    def satisfied(self) -> bool:
        return self.status == "satisfied-at-bound"

    def summary(self) -> dict:
        return {
            "status": self.status,
            "candidates": [str(c) for c in self.candidates],
            "checks": self.checks,
        }


def _unit_echelon(ring: PolyRing, monos) -> Echelon:
    ech = Echelon(track=False)
    one = 1 if ring.field.degree == 1 else ring.field.one
    for m in monos:
        ech.rows[tuple(m)] = {tuple(m): one}
    return ech


def _vec(p: Polynomial):
    rational = p.ring.field.degree == 1
    return {m: (c.coords[0] if rational else c) for m, c in p.terms.items()}


def check_prop27(mapping, d: int, M: int, candidates=None, scan: RadicalScan | None = None) -> Prop27Report:
    """Check r(Im) inside Im and r(Im) an ideal, on slices of degree <= d.

    (a) every element of the candidate ideal's slices lies in the image;
    (b) the radical-evidence monomials of a scan coincide with the
        candidate ideal's slices and are closed under multiplication by
        the variables.
    Candidates default to the evidence monomials of the scan.
    """
    mapping = _as_map(mapping)
    ring = mapping.ring
    if scan is None:
        scan = radical_scan(mapping, d, M)
    evidence = [f for f in scan.evidence() if f.degree() <= d]
    if candidates is None:
        candidates = evidence
    candidates = list(candidates)
    checks = []
    status = "satisfied-at-bound"

    def record(name, ok, detail=""):
        nonlocal status
        checks.append({"name": name, "passed": ok, "detail": detail})
        if not ok:
            status = "violated"

    # (a) ideal slices inside the image
    first_bad = None
    for e in range(1, d + 1):
        ideal = ideal_slice(candidates, e, graded=all(c.is_homogeneous() for c in candidates))
        for p in ideal.pivots():
            row = Polynomial(ring, {m: ring.field(c) for m, c in ideal.rows[p].items()})
            if member(mapping, row, d=max(row.degree(), 0), witness=False).status != IN:
                first_bad = row
                break
        if first_bad is not None:
            break
    record("ideal-inside-image", first_bad is None,
           "" if first_bad is None else f"{first_bad} is not in the image")

    # (b) evidence set equals the candidate ideal slices
    ev_monos = [next(iter(f.terms)) for f in evidence if len(f.terms) == 1]
    ev_ech = _unit_echelon(ring, ev_monos)
    mismatch = None
    for e in range(1, d + 1):
        ideal = ideal_slice(candidates, e, graded=all(c.is_homogeneous() for c in candidates))
        for p in ideal.pivots():
            res, _ = ev_ech.reduce(ideal.rows[p])
            if res:
                mismatch = f"ideal element {Polynomial(ring, {m: ring.field(c) for m, c in ideal.rows[p].items()})} lacks radical evidence"
                break
        if mismatch:
            break
        ideal_full = ideal
        for f in evidence:
            if f.degree() != e:
                continue
            res, _ = ideal_full.reduce(_vec(f))
            if res:
                mismatch = f"radical evidence {f} lies outside the candidate ideal"
                break
        if mismatch:
            break
    record("evidence-equals-ideal", mismatch is None, mismatch or "")

    # (b) closure under multiplication by variables
    ev_set = set(ev_monos)
    gap = None
    for m in sorted(ev_set, key=lambda t: (sum(t), t)):
        if sum(m) >= d:
            continue
        for i in range(ring.n):
            mm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if mm not in ev_set:
                gap = f"{monomial_str(m)} has evidence but x{i + 1}*{monomial_str(m)} does not"
                break
        if gap:
            break
    record("evidence-closed-under-variables", gap is None, gap or "")
    return Prop27Report(status, checks, candidates, scan)


# ---------------------------------------------------------------------------
# MZ spot check

@dataclass
class SpotCheckReport:
    passed: bool
    premise: list
    pairs_checked: int
    violations: list
    notes: list
    exact: bool

    def summary(self) -> dict:
        return {
            "passed": self.passed,
            "premise": [str(a) for a in self.premise],
            "pairs_checked": self.pairs_checked,
            "violations": self.violations,
            "notes": self.notes,
            "exact": self.exact,
        }


def mz_spot_check(mapping, d: int, M: int, B: int, candidates=None) -> SpotCheckReport:
    """For a with a^m in Im for m <= M, check b*a^m in Im for deg b <= B, m in [B+1, M]."""
    mapping = _as_map(mapping)
    ring = mapping.ring
    if candidates is None:
        candidates = [ring.monomial(m) for m in _monomials_between(ring.n, 1, d)]
    notes = []
    premise = []
    for a in candidates:
        if not a:
            notes.append("zero candidate passes trivially")
            continue
        power = ring.one
        ok = True
        for m in range(1, M + 1):
            power = power * a
            if member(mapping, power, witness=False).status != IN:
                ok = False
                break
        if ok:
            premise.append(a)
    if not premise:
        notes.append("empty premise set: no candidate has all powers up to M in the image")
    if B + 1 > M:
        notes.append(f"empty window: B + 1 = {B + 1} exceeds M = {M}")
    multipliers = [ring.monomial(m) for m in _monomials_between(ring.n, 0, B)]
    violations = []
    pairs = 0
    for a in premise:
        for b in multipliers:
            power = a ** (B + 1)
            for m in range(B + 1, M + 1):
                q = b * power
                pairs += 1
                v = member(mapping, q, witness=False)
                if v.status != IN:
                    violations.append({"a": str(a), "b": str(b), "m": m, "status": v.status})
                power = power * a
    return SpotCheckReport(not violations, premise, pairs, violations, notes,
                           mapping.grading == "graded")


# ---------------------------------------------------------------------------
# conjecture explorer for the triple Jordan block

def triple_jordan(ring: PolyRing, lam) -> EDerivation:
    """delta = I - phi with phi(x1) = l x1 + x2, phi(x2) = l x2 + x3, phi(x3) = l x3."""
    if ring.n != 3:
        raise ValueError("the triple Jordan block lives in three variables")
    x1, x2, x3 = ring.gens()
    lam = ring.field(lam)
    return EDerivation(Endomorphism(ring, [x1.scalar_mul(lam) + x2, x2.scalar_mul(lam) + x3,
                                           x3.scalar_mul(lam)]))


def in_conjectured_space(m) -> bool:
    return m[2] >= m[0] + 1


@dataclass
class Conjecture45Report:
    lam: str
    degree: int
    power_bound: int
    v_not_in_evidence: list
    evidence_not_in_v: list
    candidates: int
    scan: RadicalScan

    @property
    def containment_holds(self) -> bool:
        return not self.v_not_in_evidence

    def summary(self) -> dict:
        return {
            "lambda": self.lam,
            "degree": self.degree,
            "power_bound": self.power_bound,
            "candidates": self.candidates,
            "v_not_in_evidence": self.v_not_in_evidence,
            "evidence_not_in_v": self.evidence_not_in_v,
            "containment_holds": self.containment_holds,
            "notices": self.scan.notices,
        }


def conjecture45_explore(ring: PolyRing, lam, d: int, M: int,
                         power_degree_cap: int = DEFAULT_POWER_DEGREE_CAP) -> Conjecture45Report:
    """Compare radical evidence of the triple Jordan block with the monomials i3 >= i1 + 1."""
    delta = triple_jordan(ring, lam)
    scan = radical_scan(delta, d, M, power_degree_cap=power_degree_cap)
    v_missing, extra = [], []
    for entry in scan.entries:
        m = next(iter(entry.candidate.terms))
        inside = in_conjectured_space(m)
        if inside and entry.verdict != EVIDENCE:
            v_missing.append(str(entry.candidate))
        elif not inside and entry.verdict == EVIDENCE:
            extra.append(str(entry.candidate))
    return Conjecture45Report(str(ring.field(lam)), d, M, v_missing, extra, len(scan.entries), scan)
