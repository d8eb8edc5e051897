import pytest

from lfed.claims import CLAIMS, HypothesisError, verify_claim
from lfed.maps import EDerivation
from lfed.mzlab import triple_jordan
from lfed.polyring import PolyRing, monomials_of_degree
from lfed.scalar import field

from conftest import dense_in_image

ALL = ["thm2.1", "prop2.3", "prop2.4", "prop2.5", "prop2.6", "prop2.7", "thm3.1.1", "thm3.1.2",
       "thm3.1.3", "prop3.2", "cor3.3", "prop3.4", "lemma4.1", "lemma4.2", "prop4.3.1", "prop4.3.2",
       "prop4.4.1", "prop4.4.2", "remark4.6", "conj4.5-explore"]


def test_registry_complete():
    assert list(CLAIMS) == ALL


@pytest.mark.parametrize("cid", ALL)
def test_claim_passes_with_defaults(cid):
    rep = verify_claim(cid)
    assert rep.checks
    assert rep.passed, rep.summary()
    assert not rep.exploratory


def test_cor33_table_against_dense_oracle():
    rep = verify_claim("cor3.3", {"degree": 6})
    table = next(c for c in rep.checks if c.name == "membership-table")
    assert table.payload["tested"] == 28
    K = field(3)
    R = PolyRing(2, K)
    x1, x2 = R.gens()
    delta = EDerivation.from_images(R, [x1.scalar_mul(K.z) + x2, x2.scalar_mul(K.z)])
    for e in range(1, 7):
        for m in monomials_of_degree(2, e):
            expected = m[1] >= 1 or m[0] % 3 != 0
            assert dense_in_image(delta, R.monomial(m)) == expected, m


def test_prop441_parity_rule_against_dense_oracle():
    R = PolyRing(3)
    delta = triple_jordan(R, 1)
    for e in range(1, 5):
        for m in monomials_of_degree(3, e):
            i1, i2, i3 = m
            expected = i3 >= i1 if i2 % 2 else i3 >= i1 + 1
            assert dense_in_image(delta, R.monomial(m)) == expected, m


def test_thm21_rejects_root_of_unity():
    with pytest.raises(HypothesisError) as info:
        verify_claim("thm2.1", {"N": 3, "lambda": "z"})
    assert info.value.claim == "thm2.1"


def test_override_marks_exploratory():
    rep = verify_claim("thm2.1", {"N": 3, "lambda": "z"}, override=True)
    assert rep.exploratory
    assert any(not h["holds"] for h in rep.hypotheses)
    assert not rep.passed


def test_prop26_hypothesis_on_rational_coefficients():
    with pytest.raises(HypothesisError):
        verify_claim("prop2.6", {"N": 1, "coeffs": ["x1", "2*x2 + x1^2"]})


def test_prop43_swapped_hypotheses():
    with pytest.raises(HypothesisError):
        verify_claim("prop4.3.1", {"lambda1": "2", "lambda2": "z"})


def test_unknown_claim_and_param():
    with pytest.raises(ValueError):
        verify_claim("thm9.9")
    with pytest.raises(ValueError):
        verify_claim("cor3.3", {"bogus": 1})


def test_zero_checks_is_an_error(monkeypatch):
    fn, defaults, summary = CLAIMS["lemma4.1"]
    monkeypatch.setitem(CLAIMS, "lemma4.1", (lambda run: None, defaults, summary))
    with pytest.raises(RuntimeError):
        verify_claim("lemma4.1")


def test_cor33_non_root_of_unity_gives_ideal():
    rep = verify_claim("cor3.3", {"N": 1, "lambda": "2", "degree": 5})
    assert [c.name for c in rep.checks] == ["image-is-ideal"]
    assert rep.passed


def test_report_summary_is_plain_data():
    import json
    rep = verify_claim("cor3.3")
    text = json.dumps(rep.summary(), sort_keys=True)
    assert json.loads(text)["claim"] == "cor3.3"
