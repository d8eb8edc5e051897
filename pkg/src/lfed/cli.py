"""Command-line front end.

Every subcommand prints a short human-readable summary followed by a fenced
JSON report (keys sorted).  Exit status: 0 when all checks pass, 1 when a
check fails, 2 on usage, input or hypothesis errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .claims import CLAIMS, HypothesisError, verify_claim
from .image import compare_images, ideal_slice_test, image_basis, member
from .maps import Derivation, EDerivation, Endomorphism, classify
from .mzlab import (
    DEFAULT_POWER_DEGREE_CAP,
    check_prop27,
    conjecture45_explore,
    mz_spot_check,
    radical_scan,
)
from .normalize import (
    NormalizationError,
    NormalizationImpossible,
    ResonantObstruction,
    linearize_triangular_derivation,
    normalize_affine_dim2,
    shift_to_origin,
)
from .parser import PolynomialSyntaxError, parse_scalar
from .polyring import PolyRing
from .scalar import field, resonance, resonance_exists_bounded

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SCHEMA_VERSION = 1


class UsageError(ValueError):
    pass


@dataclass
class Session:
    """Resolved inputs of one invocation (session file merged with flags)."""

    n: int | None = None
    conductor: int = 1
    map_kind: str = "endomorphism"
    images: list | None = None
    options: dict = dc_field(default_factory=dict)
    other: dict = dc_field(default_factory=dict)
    verify: dict = dc_field(default_factory=dict)

    @property
    def ring(self) -> PolyRing:
        n = self.n if self.n is not None else (len(self.images) if self.images else None)
        if n is None:
            raise UsageError("number of variables unknown: give [ring] n or map images")
        return PolyRing(n, field(self.conductor))

    def build_map(self, kind=None, images=None):
        kind = kind or self.map_kind
        images = images if images is not None else self.images
        if not images:
            raise UsageError("no map given: use --images or a [map] table in the session file")
        ring = self.ring
        if len(images) != ring.n:
            raise UsageError(f"map has {len(images)} images but the ring has {ring.n} variables")
        polys = [ring.parse(str(s)) for s in images]
        if kind == "endomorphism":
            return EDerivation(Endomorphism(ring, polys))
        if kind == "derivation":
            return Derivation(ring, polys)
        raise UsageError(f"map kind must be 'endomorphism' or 'derivation', got {kind!r}")

    def option(self, name, value, default=None):
        if value is not None:
            return value
        return self.options.get(name, default)


def load_session(path: str | None) -> Session:
    if path is None:
        return Session()
    try:
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read session file {path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"session file {path}: {exc}") from exc
    ring = data.get("ring", {})
    mp = data.get("map", {})
    n = ring.get("n")
    names = ring.get("variables")
    if names is not None:
        expected = [f"x{i}" for i in range(1, len(names) + 1)]
        if list(names) != expected:
            raise UsageError(f"variables must be named {', '.join(expected)} in order")
        if n is not None and n != len(names):
            raise UsageError(f"ring n = {n} disagrees with {len(names)} variable names")
        n = len(names)
    return Session(
        n=n,
        conductor=int(ring.get("conductor", 1)),
        map_kind=mp.get("kind", "endomorphism"),
        images=mp.get("images"),
        options=dict(data.get("options", {})),
        other=dict(data.get("compare", {})),
        verify=dict(data.get("verify", {})),
    )


# ---------------------------------------------------------------------------
# commands; each returns (exit code, human lines, result dict)

def _map_header(mapping) -> dict:
    shape = classify(mapping)
    return {"kind": mapping.kind, "definition": mapping.definition(), "shape": shape.summary()}


def cmd_normalize(args, s: Session):
    mapping = s.build_map()
    shape = classify(mapping)
    method = args.method
    if method == "auto":
        if mapping.kind == "derivation":
            method = "linearize"
        elif shape.kind in ("triangular", "jordan-pairs"):
            method = "shift"
        elif mapping.ring.n == 2 and shape.affine:
            method = "dim2"
        else:
            raise UsageError(f"no normalization applies to shape {shape.kind}")
    try:
        if method == "shift":
            res = shift_to_origin(mapping)
        elif method == "linearize":
            res = linearize_triangular_derivation(mapping)
        else:
            res = normalize_affine_dim2(mapping)
    except (ResonantObstruction, NormalizationImpossible) as exc:
        result = {"map": _map_header(mapping), "method": method, "obstruction": str(exc)}
        return EXIT_FAIL, [f"normalization obstructed: {exc}"], result
    except NormalizationError as exc:
        raise UsageError(str(exc)) from exc
    summ = res.summary()
    lines = [f"method: {method}", "sigma: (" + ", ".join(summ["sigma"]) + ")",
             "normalized: (" + ", ".join(summ["normalized"]) + ")"]
    return EXIT_OK, lines, {"map": _map_header(mapping), "method": method, **summ}


def cmd_image(args, s: Session):
    mapping = s.build_map()
    d = int(s.option("degree", args.degree, 4))
    basis = image_basis(mapping, d, s.option("slack", args.slack))
    summ = basis.summary()
    lines = [f"{mapping.kind}, {basis.grading}, slack {basis.slack}, exact {basis.exact}"]
    for e in range(d + 1):
        polys = summ["bases"][str(e)]
        lines.append(f"degree {e}: dim {len(polys)}" + (": " + "; ".join(polys) if polys else ""))
    return EXIT_OK, lines, {"map": _map_header(mapping), **summ}


def cmd_member(args, s: Session):
    mapping = s.build_map()
    q = mapping.ring.parse(args.poly)
    d = s.option("degree", args.degree)
    verdict = member(mapping, q, None if d is None else int(d), s.option("slack", args.slack),
                     witness=not args.no_witness)
    lines = [f"{q}: {verdict.status}"]
    if verdict.witness is not None:
        lines.append(f"witness: {verdict.witness}")
    if verdict.residue:
        lines.append(f"residue: {verdict.residue}")
    result = {"map": _map_header(mapping), "query": str(q), **verdict.summary()}
    code = EXIT_OK
    if args.expect is not None:
        result["expected"] = args.expect
        result["matches"] = verdict.status == args.expect
        if not result["matches"]:
            code = EXIT_FAIL
            lines.append(f"expected {args.expect}")
    return code, lines, result


def cmd_ideal_test(args, s: Session):
    mapping = s.build_map()
    gens_src = args.generators or s.options.get("generators")
    if not gens_src:
        raise UsageError("give ideal generators with --generators")
    gens = [mapping.ring.parse(g) for g in gens_src]
    d = int(s.option("degree", args.degree, 4))
    rep = ideal_slice_test(mapping, gens, d, s.option("slack", args.slack))
    lines = [f"ideal ({', '.join(str(g) for g in gens)}): {'pass' if rep.passed else 'fail'}"]
    if rep.detail:
        lines.append(rep.detail)
    return (EXIT_OK if rep.passed else EXIT_FAIL), lines, {
        "map": _map_header(mapping), "generators": [str(g) for g in gens], **rep.summary()}


def cmd_compare(args, s: Session):
    a = s.build_map()
    kind = args.other_kind or s.other.get("kind", "endomorphism")
    images = args.other_images or s.other.get("images")
    b = s.build_map(kind, images)
    d = int(s.option("degree", args.degree, 4))
    rep = compare_images(a, b, d, s.option("slack", args.slack))
    lines = [f"images {'agree' if rep.passed else 'differ'} on degrees 0..{rep.degrees_checked[-1]}"]
    if rep.detail:
        lines.append(rep.detail)
    return (EXIT_OK if rep.passed else EXIT_FAIL), lines, {
        "map": _map_header(a), "other": _map_header(b), **rep.summary()}


def cmd_radical_scan(args, s: Session):
    mapping = s.build_map()
    d = int(s.option("degree", args.degree, 3))
    M = int(s.option("power_bound", args.power_bound, 6))
    cap = int(s.option("power_degree_cap", args.cap, DEFAULT_POWER_DEGREE_CAP))
    extra = [mapping.ring.parse(p) for p in (args.extra or s.options.get("extra", []))]
    scan = radical_scan(mapping, d, M, extra=extra, power_degree_cap=cap)
    lines = []
    for e in scan.entries:
        tail = f" (fails at m = {e.failing_powers[0]})" if e.failing_powers else ""
        lines.append(f"{e.candidate}: {e.verdict}{tail}")
    lines.extend(f"notice: {n}" for n in scan.notices)
    return EXIT_OK, lines, {"map": _map_header(mapping), **scan.summary()}


def cmd_mz_check(args, s: Session):
    mapping = s.build_map()
    d = int(s.option("degree", args.degree, 2))
    M = int(s.option("power_bound", args.power_bound, 6))
    B = int(s.option("multiplier_degree", args.multiplier_degree, 1))
    rep = mz_spot_check(mapping, d, M, B)
    ok = rep.passed
    lines = [f"spot check: {len(rep.premise)} premise elements, {rep.pairs_checked} products, "
             f"{len(rep.violations)} violations"]
    lines.extend(f"note: {n}" for n in rep.notes)
    result = {"map": _map_header(mapping), "spot_check": rep.summary()}
    cands = args.candidates or s.options.get("candidates")
    if cands:
        polys = [mapping.ring.parse(c) for c in cands]
        p27 = check_prop27(mapping, d, M, candidates=polys)
        ok = ok and p27.satisfied
        lines.append(f"sufficient condition: {p27.status}")
        lines.extend(f"  {c['name']}: {'pass' if c['passed'] else 'fail'} {c['detail']}".rstrip()
                     for c in p27.checks)
        result["sufficient_condition"] = p27.summary()
    return (EXIT_OK if ok else EXIT_FAIL), lines, result


def _param_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def cmd_verify(args, s: Session):
    if args.list:
        lines = [f"{cid}: {summary}" for cid, (_, _, summary) in CLAIMS.items()]
        return EXIT_OK, lines, {"claims": {cid: {"summary": summ, "defaults": defaults}
                                            for cid, (_, defaults, summ) in CLAIMS.items()}}
    cid = args.claim or s.verify.get("claim")
    if not cid:
        raise UsageError("give --claim (or --list)")
    params = dict(s.verify.get("params", {}))
    if args.conductor is not None:
        params["N"] = args.conductor
    elif s.conductor != 1 or "N" in params:
        params.setdefault("N", s.conductor)
    if args.degree is not None:
        params["degree"] = args.degree
    for item in args.param or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        params[key.strip()] = _param_value(value.strip())
    override = args.override or bool(s.verify.get("override", False))
    report = verify_claim(cid, params, override=override)
    summ = report.summary()
    lines = [f"claim {cid}: {'PASS' if report.passed else 'FAIL'}"
             + (" (exploratory: hypotheses overridden)" if report.exploratory else "")]
    for h in report.hypotheses:
        lines.append(f"  hypothesis {h['name']}: {'holds' if h['holds'] else 'VIOLATED'} {h['detail']}".rstrip())
    for c in report.checks:
        lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    return (EXIT_OK if report.passed else EXIT_FAIL), lines, summ


def cmd_explore(args, s: Session):
    K = field(args.conductor if args.conductor is not None else s.conductor)
    lam = parse_scalar(str(s.option("lambda", args.lam, "1")), PolyRing(1, K))
    d = int(s.option("degree", args.degree, 4))
    M = int(s.option("power_bound", args.power_bound, 6))
    rep = conjecture45_explore(PolyRing(3, K), lam, d, M)
    lines = [f"lambda = {lam}, degree <= {d}, powers <= {M}, {rep.candidates} candidates",
             f"V without evidence: {rep.v_not_in_evidence or 'none'}",
             f"evidence outside V: {rep.evidence_not_in_v or 'none'}"]
    return (EXIT_OK if rep.containment_holds else EXIT_FAIL), lines, rep.summary()


def cmd_resonance(args, s: Session):
    K = field(args.conductor if args.conductor is not None else s.conductor)
    src = args.lambdas or s.options.get("lambdas")
    if not src:
        raise UsageError("give eigenvalues with --lambdas")
    ring1 = PolyRing(1, K)
    lams = [parse_scalar(str(v), ring1) for v in src]
    res = resonance(lams, bound=args.bound)
    bounded = resonance_exists_bounded(lams, args.bound)
    lines = [f"lambdas: {', '.join(str(x) for x in lams)}",
             f"resonance: {list(res.witness) if res.exists else 'none'} "
             f"({'certified' if res.certified else 'bounded search only'})"]
    return EXIT_OK, lines, {
        "lambdas": [str(x) for x in lams],
        "witness": list(res.witness) if res.exists else None,
        "certified": res.certified,
        "bound": args.bound,
        "bounded_witness": list(bounded) if bounded else None,
    }


COMMANDS = {
    "normalize": cmd_normalize,
    "image": cmd_image,
    "member": cmd_member,
    "ideal-test": cmd_ideal_test,
    "compare": cmd_compare,
    "radical-scan": cmd_radical_scan,
    "mz-check": cmd_mz_check,
    "verify": cmd_verify,
    "explore-conj45": cmd_explore,
    "resonance": cmd_resonance,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--session", "-s", help="TOML session file")
    common.add_argument("--conductor", "-N", type=int, help="work in Q(z_N)")
    common.add_argument("--degree", "-d", type=int, help="degree bound")
    common.add_argument("--report", help="also write the JSON report to this file")
    common.add_argument("--json-only", action="store_true", help="print only the JSON report")

    mapped = argparse.ArgumentParser(add_help=False)
    mapped.add_argument("--kind", choices=["endomorphism", "derivation"],
                        help="endomorphism phi (delta = I - phi) or derivation coefficients")
    mapped.add_argument("--images", nargs="+", metavar="POLY", help="phi(x_i) or D(x_i), i = 1..n")
    mapped.add_argument("--slack", type=int, help="extra preimage degree for non-graded maps")

    ap = argparse.ArgumentParser(prog="lfed", description="Images, normal forms and Mathieu-Zhao checks "
                                 "for E-derivations and derivations of polynomial rings.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("normalize", parents=[common, mapped], help="construct a normalizing automorphism")
    p.add_argument("--method", choices=["auto", "shift", "linearize", "dim2"], default="auto")

    sub.add_parser("image", parents=[common, mapped], help="echelon bases of the image up to a degree")

    p = sub.add_parser("member", parents=[common, mapped], help="decide membership of one polynomial")
    p.add_argument("--poly", "-p", required=True)
    p.add_argument("--no-witness", action="store_true", help="skip the preimage computation")
    p.add_argument("--expect", choices=["in", "not-in-certified", "not-found-within-slack"],
                   help="exit 1 unless the verdict matches")

    p = sub.add_parser("ideal-test", parents=[common, mapped], help="compare image slices with an ideal")
    p.add_argument("--generators", "-g", nargs="+", metavar="POLY")

    p = sub.add_parser("compare", parents=[common, mapped], help="compare the images of two maps")
    p.add_argument("--other-kind", choices=["endomorphism", "derivation"])
    p.add_argument("--other-images", nargs="+", metavar="POLY")

    p = sub.add_parser("radical-scan", parents=[common, mapped], help="bounded radical evidence")
    p.add_argument("--power-bound", "-M", type=int)
    p.add_argument("--cap", type=int, help=f"power degree cap (default {DEFAULT_POWER_DEGREE_CAP})")
    p.add_argument("--extra", nargs="+", metavar="POLY", help="additional candidates")

    p = sub.add_parser("mz-check", parents=[common, mapped], help="Mathieu-Zhao spot check")
    p.add_argument("--power-bound", "-M", type=int)
    p.add_argument("--multiplier-degree", "-B", type=int)
    p.add_argument("--candidates", nargs="+", metavar="POLY",
                   help="also test the radical-ideal sufficient condition for these generators")

    p = sub.add_parser("verify", parents=[common], help="run a registered claim battery")
    p.add_argument("--claim", "-c", choices=list(CLAIMS), metavar="ID")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="claim parameter; VALUE is JSON or a plain string")
    p.add_argument("--override", action="store_true",
                   help="run outside the hypotheses; the report is marked exploratory")
    p.add_argument("--list", action="store_true", help="list registered claims")

    p = sub.add_parser("explore-conj45", parents=[common], help="radical evidence vs the conjectured space")
    p.add_argument("--lambda", dest="lam", metavar="SCALAR")
    p.add_argument("--power-bound", "-M", type=int)

    p = sub.add_parser("resonance", parents=[common], help="multiplicative resonance among eigenvalues")
    p.add_argument("--lambdas", nargs="+", metavar="SCALAR")
    p.add_argument("--bound", type=int, default=8, help="bounded search degree")
    return ap


def _merge(args, s: Session) -> Session:
    if getattr(args, "conductor", None) is not None:
        s.conductor = args.conductor
    if getattr(args, "kind", None):
        s.map_kind = args.kind
    if getattr(args, "images", None):
        s.images = args.images
        s.n = len(args.images)
    return s


def render(command: str, code: int, lines, result: dict, json_only: bool = False) -> str:
    status = {EXIT_OK: "pass", EXIT_FAIL: "fail"}.get(code, "error")
    doc = {"schema": SCHEMA_VERSION, "command": command, "status": status, "exit_code": code,
           "result": result}
    block = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    if json_only:
        return block + "\n"
    text = "\n".join(lines)
    return f"{text}\n\n```json\n{block}\n```\n"


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    json_only = getattr(args, "json_only", False)
    try:
        session = _merge(args, load_session(args.session))
        code, lines, result = COMMANDS[args.command](args, session)
    except HypothesisError as exc:
        err.write(f"error: {exc}\n")
        code, lines = EXIT_USAGE, [f"hypothesis violated: {exc.hypothesis}"]
        result = {"error": "hypothesis", "claim": exc.claim, "hypothesis": exc.hypothesis,
                  "detail": exc.detail, "hint": "rerun with --override for an exploratory report"}
    except PolynomialSyntaxError as exc:
        err.write(f"error: {exc}\n")
        code, lines = EXIT_USAGE, [f"parse error: {exc}"]
        result = {"error": "parse", "detail": str(exc), "line": exc.line, "column": exc.column}
    except (UsageError, ValueError, IndexError) as exc:
        err.write(f"error: {exc}\n")
        code, lines, result = EXIT_USAGE, [f"error: {exc}"], {"error": "input", "detail": str(exc)}
    text = render(args.command, code, lines, result, json_only)
    out.write(text)
    if getattr(args, "report", None):
        doc = text if json_only else text.split("```json\n", 1)[1].rsplit("\n```", 1)[0] + "\n"
        Path(args.report).write_text(doc, encoding="utf-8")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
