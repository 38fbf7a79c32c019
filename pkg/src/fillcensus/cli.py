"""Command line front end: input parsing, report serialization and dispatch.

Exit codes: 0 success, 2 invalid input, 3 equivalence left undecided.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .census import CensusReport, FamilyVerdict, FillingCandidate, build_census, match_known_family
from .dualgraph import DualGraph, NotDuallyPositive, build_dual, dual_to_dot, verify_duality
from .homology import HomRep, IntersectionConfiguration, Uniqueness
from .monodromy import (
    DEFAULT_BUDGET,
    MonodromyError,
    UnsupportedShape,
    canonical_word,
    parse_word,
    prove_equivalent,
    rep_to_word,
)
from .plumbing import (
    PlumbingError,
    SeifertData,
    StarGraph,
    graph_from_seifert,
    is_dually_positive,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNKNOWN = 3


class InputError(ValueError):
    pass


class InputSyntaxError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InputValidationError(InputError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class InputDoc:
    graph: StarGraph
    seifert: SeifertData | None
    symmetry_quotient: bool = True
    budget: int = DEFAULT_BUDGET


def _int(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputValidationError(field, f"expected an integer, got {value!r}")
    return value


def _rational(value: Any, field: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputValidationError(field, f"expected a 'p/q' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise InputValidationError(field, f"not a rational number: {value!r}") from None


def parse_input(text: str) -> InputDoc:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise InputValidationError("$", "top level must be an object")
    unknown = set(doc) - {"graph", "seifert", "options"}
    if unknown:
        raise InputValidationError(sorted(unknown)[0], "unknown key")
    if ("graph" in doc) == ("seifert" in doc):
        raise InputValidationError("$", "give exactly one of 'graph' or 'seifert'")

    seifert = None
    if "graph" in doc:
        spec = doc["graph"]
        if not isinstance(spec, dict):
            raise InputValidationError("graph", "must be an object")
        e0 = _int(spec.get("e0"), "graph.e0")
        arms = spec.get("arms")
        if not isinstance(arms, list) or not arms:
            raise InputValidationError("graph.arms", "must be a nonempty list of lists")
        parsed = []
        for i, arm in enumerate(arms):
            if not isinstance(arm, list) or not arm:
                raise InputValidationError(f"graph.arms[{i}]", "must be a nonempty list")
            weights = [_int(w, f"graph.arms[{i}][{j}]") for j, w in enumerate(arm)]
            for j, w in enumerate(weights):
                if w > -2:
                    raise InputValidationError(f"graph.arms[{i}][{j}]", f"arm weight {w} must be <= -2")
            parsed.append(tuple(weights))
        graph = StarGraph(e0, tuple(parsed))
    else:
        spec = doc["seifert"]
        if not isinstance(spec, dict):
            raise InputValidationError("seifert", "must be an object")
        e0 = _int(spec.get("e0"), "seifert.e0")
        rs = spec.get("r")
        if not isinstance(rs, list) or not rs:
            raise InputValidationError("seifert.r", "must be a nonempty list")
        coeffs = []
        for i, r in enumerate(rs):
            value = _rational(r, f"seifert.r[{i}]")
            if value >= -1:
                raise InputValidationError(f"seifert.r[{i}]", f"{value} must be < -1")
            coeffs.append(value)
        seifert = SeifertData(e0, tuple(coeffs))
        graph = graph_from_seifert(seifert)

    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise InputValidationError("options", "must be an object")
    quotient = options.get("symmetry_quotient", True)
    if not isinstance(quotient, bool):
        raise InputValidationError("options.symmetry_quotient", "must be a boolean")
    budget = _int(options.get("budget", DEFAULT_BUDGET), "options.budget")
    if budget < 1:
        raise InputValidationError("options.budget", "must be positive")
    return InputDoc(graph, seifert, quotient, budget)


# ---------------------------------------------------------------------------
# report serialization


def _graph_json(g: StarGraph) -> dict:
    return {"e0": g.central_weight, "arms": [list(arm) for arm in g.arms]}


def _seifert_json(s: SeifertData) -> dict:
    return {"e0": s.e0, "r": [str(c) for c in s.coefficients]}


def _candidate_json(c: FillingCandidate) -> dict:
    return {
        "chi": c.euler,
        "sigma_bound": c.sigma_abs_bound,
        "M": c.M,
        "m_plus_1": c.m_plus_1,
        "N": c.N,
        "b1_bound": c.b1_bound,
        "config": {
            "lines": c.configuration.line_count,
            "multipoints": [list(p) for p in c.configuration.multipoints],
            "name": c.configuration.name,
        },
        "uniqueness": c.uniqueness.value,
        "annotation": c.annotation,
        "rep": {"basis_size": c.rep.basis_size, "classes": [list(row) for row in c.rep.classes]},
    }


def _verdict_json(v: FamilyVerdict) -> dict:
    return {
        "family": v.family,
        "expected": {"count": v.expected_count, "chi": list(v.expected_chi)},
        "got": {"count": v.got_count, "chi": list(v.got_chi)},
        "pass": v.passed,
    }


def report_to_json(report: CensusReport) -> dict:
    return {
        "input": {"graph": _graph_json(report.graph), "seifert": _seifert_json(report.seifert)},
        "symmetry_quotient": report.quotient,
        "dual_graph": {
            "center": report.dual.central_weight,
            "arms": [list(arm) for arm in report.dual.arms],
        },
        "candidates": [_candidate_json(c) for c in report.candidates],
        "fixtures": [_verdict_json(v) for v in report.verdicts],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report_from_json(text: str) -> CensusReport:
    """Rebuild a census report from its JSON form."""
    doc = json.loads(text)
    graph = StarGraph(doc["input"]["graph"]["e0"], tuple(tuple(a) for a in doc["input"]["graph"]["arms"]))
    s = doc["input"]["seifert"]
    seifert = SeifertData(s["e0"], tuple(Fraction(r) for r in s["r"]))
    dual = DualGraph(doc["dual_graph"]["center"], tuple(tuple(a) for a in doc["dual_graph"]["arms"]))
    candidates = []
    for c in doc["candidates"]:
        rep = HomRep(c["rep"]["basis_size"], tuple(tuple(row) for row in c["rep"]["classes"]))
        config = IntersectionConfiguration(
            c["config"]["lines"], tuple(tuple(p) for p in c["config"]["multipoints"]), c["config"]["name"]
        )
        candidates.append(
            FillingCandidate(
                rep=rep,
                M=c["M"],
                m_plus_1=c["m_plus_1"],
                euler=c["chi"],
                sigma_abs_bound=c["sigma_bound"],
                b1_bound=c["b1_bound"],
                N=c["N"],
                configuration=config,
                uniqueness=Uniqueness(c["uniqueness"]),
                annotation=c["annotation"],
            )
        )
    verdicts = [
        FamilyVerdict(
            v["family"],
            v["expected"]["count"],
            tuple(v["expected"]["chi"]),
            v["got"]["count"],
            tuple(v["got"]["chi"]),
        )
        for v in doc["fixtures"]
    ]
    return CensusReport(graph, seifert, dual, candidates, doc["symmetry_quotient"], verdicts)


def report_to_text(report: CensusReport) -> str:
    lines = [
        f"graph     {report.graph}",
        f"seifert   {report.seifert}",
        f"dual      {report.dual}",
        f"candidates {len(report.candidates)}",
    ]
    for i, c in enumerate(report.candidates, 1):
        config = c.configuration.name or (
            " ".join("{" + ",".join(map(str, p)) + "}" for p in c.configuration.multipoints) or "generic"
        )
        note = f"  [{c.annotation}]" if c.annotation else ""
        lines.append(
            f"  {i:>2}. chi={c.euler} |sigma|<={c.sigma_abs_bound} M={c.M} config={config} "
            f"{c.uniqueness.value}{note}"
        )
    for v in report.verdicts:
        mark = "PASS" if v.passed else "FAIL"
        lines.append(
            f"  fixture {v.family}: {mark} expected {v.expected_count} {list(v.expected_chi)} "
            f"got {v.got_count} {list(v.got_chi)}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def run_census(doc: InputDoc, fmt: str, fixtures: bool) -> str:
    report = build_census(doc.graph, quotient=doc.symmetry_quotient)
    if fixtures:
        report.verdicts = match_known_family(doc.graph, report)
    if fmt == "text":
        return report_to_text(report)
    return dumps(report_to_json(report))


def run_dual(doc: InputDoc, fmt: str) -> str:
    dg = build_dual(doc.graph)
    check = verify_duality(dg, doc.graph)
    if fmt == "dot":
        return dual_to_dot(dg)
    if fmt == "text":
        steps = len(dg.origin.config.blowup_log) if dg.origin else 0
        return f"graph {doc.graph}\ndual  {dg}\nblow-ups {steps}\nduality {'ok' if check else 'FAILED'}\n"
    return dumps(
        {
            "input": {"graph": _graph_json(doc.graph)},
            "dual_graph": {"center": dg.central_weight, "arms": [list(a) for a in dg.arms]},
            "blowups": len(dg.origin.config.blowup_log) if dg.origin else 0,
            "duality_ok": check.ok,
            "diagnostics": list(check.diagnostics),
            "dot": dual_to_dot(dg),
        }
    )


def run_monodromy(doc: InputDoc, fmt: str) -> str:
    report = build_census(doc.graph, quotient=doc.symmetry_quotient)
    if any(len(arm) != 1 for arm in report.dual.arms):
        raise UnsupportedShape(f"dual graph {report.dual} has an arm longer than one vertex")
    k = report.dual.d
    n = [-arm[0] for arm in report.dual.arms]
    words = [(c.euler, rep_to_word(c.rep, report.dual)) for c in report.candidates]
    canonical = canonical_word(k, n) if k >= 3 else None
    if fmt == "text":
        lines = [f"dual {report.dual}"]
        if canonical is not None:
            lines.append(f"canonical {canonical}")
        lines += [f"  chi={chi}: {w}" for chi, w in words]
        return "\n".join(lines) + "\n"
    return dumps(
        {
            "input": {"graph": _graph_json(doc.graph)},
            "dual_graph": {"center": report.dual.central_weight, "arms": [list(a) for a in report.dual.arms]},
            "canonical": str(canonical) if canonical is not None else None,
            "words": [{"chi": chi, "word": str(w)} for chi, w in words],
        }
    )


def run_verify(first: str, second: str, budget: int, holes: int | None, fmt: str) -> tuple[str, int]:
    w1 = parse_word(first, holes)
    w2 = parse_word(second, holes)
    k = max(w1.page_holes, w2.page_holes)
    w1, w2 = parse_word(first, k), parse_word(second, k)
    result = prove_equivalent(w1, w2, budget=budget)
    code = EXIT_UNKNOWN if result.status == "Unknown" else EXIT_OK
    body: dict[str, Any] = {"status": result.status, "left": str(w1), "right": str(w2), "holes": k}
    if result.status == "Proven":
        body["method"] = result.method
        body["trace"] = [mv.to_json() for mv in result.trace.moves]
    elif result.status == "Disproven":
        body["invariant"] = result.invariant
        body["left_value"] = json.loads(json.dumps(result.left))
        body["right_value"] = json.loads(json.dumps(result.right))
    else:
        body["explored"] = result.explored
    if fmt == "text":
        lines = [f"{result.status}"]
        if result.status == "Proven":
            lines.append(f"method {result.method}, {len(result.trace.moves)} moves")
            for mv in result.trace.moves:
                params = " ".join("{" + ",".join(map(str, p)) + "}" for p in mv.params)
                lines.append(f"  {mv.name} @{mv.position} {params}".rstrip())
        elif result.status == "Disproven":
            lines.append(f"{result.invariant}: {result.left} != {result.right}")
        else:
            lines.append(f"explored {result.explored} states")
        return "\n".join(lines) + "\n", code
    return dumps(body), code


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fillcensus", description="Symplectic filling census for star plumbings.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", nargs="?", default="-", help="JSON input file, '-' for stdin")
        p.add_argument("--no-symmetry-quotient", action="store_true")

    p = sub.add_parser("census", help="enumerate filling candidates")
    add_input(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--fixtures", action="store_true", help="compare with the known classification families")

    p = sub.add_parser("dual", help="compute the dual graph")
    add_input(p)
    p.add_argument("--format", choices=("json", "text", "dot"), default="json")

    p = sub.add_parser("monodromy", help="vanishing-cycle words of each candidate")
    add_input(p)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("verify", help="decide equivalence of two twist words")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--holes", type=int, default=None, help="number of holes on the page")
    p.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            if args.budget < 1:
                raise InputValidationError("--budget", "must be positive")
            out, code = run_verify(args.first, args.second, args.budget, args.holes, args.format)
            sys.stdout.write(out)
            return code
        doc = parse_input(_read_input(args.input))
        if args.no_symmetry_quotient:
            doc = InputDoc(doc.graph, doc.seifert, False, doc.budget)
        if not is_dually_positive(doc.graph):
            raise InputValidationError("graph", f"{doc.graph} is not dually positive")
        if args.command == "census":
            out = run_census(doc, args.format, args.fixtures)
        elif args.command == "dual":
            out = run_dual(doc, args.format)
        else:
            out = run_monodromy(doc, args.format)
        sys.stdout.write(out)
        return EXIT_OK
    except (InputError, PlumbingError, MonodromyError, NotDuallyPositive, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
