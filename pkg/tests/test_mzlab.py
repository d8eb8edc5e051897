import pytest

from lfed.image import NOT_IN, member
from lfed.maps import EDerivation, Endomorphism
from lfed.mzlab import (
    EVIDENCE,
    EXCLUDED,
    INCONCLUSIVE,
    check_prop27,
    conjecture45_explore,
    in_conjectured_space,
    mz_spot_check,
    radical_scan,
    triple_jordan,
)
from lfed.polyring import PolyRing
from lfed.scalar import field

Z3 = field(3)


def zeta3_pair():
    R = PolyRing(2, Z3)
    x1, x2 = R.gens()
    return R, EDerivation.from_images(R, [x1.scalar_mul(Z3.z) + x2, x2.scalar_mul(Z3.z)])


def pair_plus_single(l1, l2):
    R = PolyRing(3, Z3)
    x1, x2, x3 = R.gens()
    l1, l2 = Z3(l1), Z3(l2)
    return R, EDerivation.from_images(R, [x1.scalar_mul(l1) + x2, x2.scalar_mul(l1), x3.scalar_mul(l2)])


def test_zeta3_radical_scan():
    R, delta = zeta3_pair()
    x1, x2 = R.gens()
    scan = radical_scan(delta, 3, 6)
    assert scan.exact
    assert scan.verdict_of(x2) == EVIDENCE
    entry = next(e for e in scan.entries if e.candidate == x1)
    assert entry.verdict == EXCLUDED and entry.failing_powers == [3]
    # evidence is exactly the monomials divisible by x2
    for e in scan.entries:
        m = next(iter(e.candidate.terms))
        assert (e.verdict == EVIDENCE) == (m[1] >= 1)


def test_excluded_verdicts_recheck():
    R, delta = zeta3_pair()
    scan = radical_scan(delta, 3, 6)
    for e in scan.entries:
        if e.verdict == EXCLUDED:
            m = e.failing_powers[-1]
            assert member(delta, e.candidate ** m).status == NOT_IN


def test_zero_map_excludes_everything():
    R = PolyRing(2)
    zero = EDerivation(Endomorphism.identity(R))
    scan = radical_scan(zero, 2, 3)
    assert all(e.verdict == EXCLUDED and e.failing_powers == [1] for e in scan.entries)


def test_degree_zero_scan_is_vacuous():
    _, delta = zeta3_pair()
    assert radical_scan(delta, 0, 4).entries == []
    with pytest.raises(ValueError):
        radical_scan(delta, 1, 0)


def test_power_cap_truncates_with_notice():
    _, delta = zeta3_pair()
    scan = radical_scan(delta, 2, 6, power_degree_cap=5)
    assert scan.notices
    assert any(e.truncated for e in scan.entries)


def test_affine_scan_is_inconclusive():
    R = PolyRing(2)
    x1, x2 = R.gens()
    delta = EDerivation.from_images(R, [x1 + x2 ** 2, x2])
    scan = radical_scan(delta, 1, 2)
    assert not scan.exact
    assert all(e.verdict != EXCLUDED for e in scan.entries)
    assert any(e.verdict == INCONCLUSIVE for e in scan.entries)


@pytest.mark.parametrize("l1,l2,gens", [("z", 2, (1, 2)), (2, "z", (0, 1))])
def test_prop27_on_pair_plus_single(l1, l2, gens):
    R, delta = pair_plus_single(Z3.z if l1 == "z" else l1, Z3.z if l2 == "z" else l2)
    cands = [R.gens()[i] for i in gens]
    rep = check_prop27(delta, 4, 6, candidates=cands)
    assert rep.satisfied, rep.summary()
    assert rep.status == "satisfied-at-bound"
    assert [c["name"] for c in rep.checks] == [
        "ideal-inside-image", "evidence-equals-ideal", "evidence-closed-under-variables"]


def test_prop27_violated_for_zero_map():
    R = PolyRing(2)
    zero = EDerivation(Endomorphism.identity(R))
    rep = check_prop27(zero, 2, 3, candidates=[R.gens()[0]])
    assert not rep.satisfied
    assert not rep.checks[0]["passed"]


def test_spot_check_examples():
    R = PolyRing(3)
    x1, x2, x3 = R.gens()
    delta = triple_jordan(R, 1)
    rep = mz_spot_check(delta, 1, 6, 1, candidates=[x3])
    assert rep.premise == [x3]
    assert rep.passed and rep.pairs_checked > 0
    assert member(delta, x1 * x3 ** 2).is_in
    rep = mz_spot_check(delta, 1, 4, 1, candidates=[R.zero])
    assert rep.passed and rep.pairs_checked == 0
    zero = EDerivation(Endomorphism.identity(R))
    rep = mz_spot_check(zero, 1, 3, 1)
    assert rep.premise == [] and rep.pairs_checked == 0
    assert any("empty premise" in n for n in rep.notes)


@pytest.mark.parametrize("N,lam", [(1, 1), (2, -1)])
def test_conjectured_space_inside_radical_evidence(N, lam):
    R = PolyRing(3, field(N))
    rep = conjecture45_explore(R, lam, 4, 6)
    assert rep.containment_holds
    assert rep.candidates == 34


def test_conjecture_vacuous_at_degree_zero():
    rep = conjecture45_explore(PolyRing(3), 1, 0, 3)
    assert rep.candidates == 0 and rep.containment_holds


def test_in_conjectured_space():
    assert in_conjectured_space((0, 0, 1))
    assert in_conjectured_space((1, 5, 2))
    assert not in_conjectured_space((1, 0, 1))
