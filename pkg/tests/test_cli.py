import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from lfed.cli import run
from lfed.maps import EDerivation
from lfed.parser import parse_polynomial
from lfed.polyring import PolyRing
from lfed.scalar import field

DOCS = Path(__file__).resolve().parent.parent / "docs"
SESSION = str(DOCS / "example_session.toml")


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def report(text):
    if text.lstrip().startswith("{"):
        return json.loads(text)
    return json.loads(text.split("```json\n", 1)[1].rsplit("\n```", 1)[0])


def test_verify_cor33():
    code, out, _ = invoke("verify", "--claim", "cor3.3", "--conductor", "3", "--degree", "9")
    assert code == 0
    doc = report(out)
    assert doc["status"] == "pass" and doc["result"]["claim"] == "cor3.3"


def test_member_cube_not_in():
    code, out, _ = invoke("member", "-s", SESSION, "--poly", "x1^3")
    assert code == 0
    assert report(out)["result"]["status"] == "not-in-certified"


def test_member_expect_mismatch_fails():
    code, out, _ = invoke("member", "-s", SESSION, "--poly", "x1^3", "--expect", "in")
    assert code == 1
    res = report(out)["result"]
    assert res["expected"] == "in" and res["matches"] is False


@pytest.mark.parametrize("poly", ["x1^2*x2", "x2^3 + 2*x1*x2", "z*x1^2 - x1*x2"])
def test_member_witness_revalidates(poly):
    code, out, _ = invoke("member", "-s", SESSION, "--poly", poly, "--json-only")
    res = report(out)["result"]
    assert res["status"] == "in"
    R = PolyRing(2, field(3))
    delta = EDerivation.from_images(R, [parse_polynomial(p, R) for p in res["map"]["definition"]])
    assert delta(parse_polynomial(res["witness"], R)) == parse_polynomial(poly, R)


def test_verify_thm21_resonant_lambda_is_hypothesis_error():
    code, out, err = invoke("verify", "--claim", "thm2.1", "-N", "3", "--param", "lambda=z")
    assert code == 2
    res = report(out)["result"]
    assert res["error"] == "hypothesis" and res["hypothesis"] == "non-resonance"
    assert "error:" in err


def test_verify_override_is_exploratory():
    code, out, _ = invoke("verify", "--claim", "thm2.1", "-N", "3", "--param", "lambda=z", "--override")
    res = report(out)["result"]
    assert res["exploratory"] is True
    assert code == 1


def test_parse_error_position():
    code, out, _ = invoke("member", "-s", SESSION, "--poly", "x1 + * x2")
    assert code == 2
    res = report(out)["result"]
    assert res["error"] == "parse" and res["column"] == 6


def test_missing_file_and_bad_usage():
    assert invoke("image", "-s", "/nonexistent.toml")[0] == 2
    assert invoke("no-such-command")[0] == 2
    assert invoke("image", "--images", "x1", "x2", "-N", "1")[0] == 0
    assert invoke("image", "--images", "x1", "-N", "1", "--kind", "derivation", "-d", "2")[0] == 0


def test_normalize_resonant_derivation_exits_one():
    code, out, _ = invoke("normalize", "--kind", "derivation", "--images", "x1", "2*x2 + x1^2")
    assert code == 1
    assert "obstruction" in report(out)["result"]


def test_normalize_shift():
    code, out, _ = invoke("normalize", "--images", "2*x1 + x2 + 5", "2*x2 + 3")
    assert code == 0
    res = report(out)["result"]
    assert res["sigma"] == ["x1 + 2", "x2 + 3"]


def test_session_commands_pass():
    for argv in (["image"], ["radical-scan"], ["mz-check"], ["compare"], ["verify"],
                 ["ideal-test", "-g", "x1", "x2"]):
        code, out, _ = invoke(*argv, "-s", SESSION)
        doc = report(out)
        assert doc["schema"] == 1 and doc["command"] == argv[0]
        if argv[0] == "ideal-test":
            # the zeta_3 image is not the maximal ideal
            assert code == 1 and doc["status"] == "fail"
        else:
            assert code == 0, argv


def test_resonance_and_explore():
    code, out, _ = invoke("resonance", "-N", "3", "--lambdas", "z", "2")
    assert code == 0
    assert report(out)["result"]["witness"] == [3, 0]
    code, out, _ = invoke("explore-conj45", "--lambda", "1", "-d", "3", "-M", "5")
    assert code == 0
    assert report(out)["result"]["containment_holds"] is True


def test_output_is_deterministic():
    argv = ["radical-scan", "-s", SESSION, "-d", "2"]
    assert invoke(*argv)[1] == invoke(*argv)[1]
    argv = ["verify", "--claim", "prop4.4.2"]
    assert invoke(*argv)[1] == invoke(*argv)[1]


def test_report_file(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = invoke("verify", "--claim", "lemma4.2", "--report", str(path))
    assert code == 0
    assert json.loads(path.read_text()) == report(out)


def test_verify_list():
    code, out, _ = invoke("verify", "--list")
    assert code == 0
    assert "remark4.6" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lfed", "member", "-s", SESSION, "-p", "x1^3", "--json-only"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["status"] == "not-in-certified"
