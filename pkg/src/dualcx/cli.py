"""``dualcx`` command line: build, homology, quotient, pi1, check, join, cone, subdivide.

Reports go to stdout as canonical JSON, a one-line summary to stderr.
Exit codes: 0 ok, 1 expected-block mismatch, 2 schema, 3 validation,
4 action, 5 connectivity, 6 inconsistent verdict.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Sequence

from . import __version__, builders, io
from .complex import ComplexError, num_components
from .fundamental_group import DEFAULT_COSET_CAP, DisconnectedError, abelianization, low_index_probe, presentation
from .group_action import DEFAULT_CAP, ActionError, GroupTooLarge, QuotientError, invariant_rank_check, orbits_and_stabilizers, quotient
from .homology import betti, euler_characteristic, integral_homology
from .recognizer import INCONSISTENT, collapse, cy_degeneration_report, sphere_quotient_report
from .subdivision import iterated_barycentric

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_SCHEMA = 2
EXIT_VALIDATION = 3
EXIT_ACTION = 4
EXIT_CONNECTIVITY = 5
EXIT_INCONSISTENT = 6


class _Fail(Exception):
    def __init__(self, code: int, message: str, details: Sequence[str] = ()):
        super().__init__(message)
        self.code = code
        self.details = list(details)


def _load(path: str) -> io.InputDocument:
    try:
        return io.load_document(path)
    except io.SchemaError as exc:
        raise _Fail(EXIT_SCHEMA, str(exc)) from exc
    except io.ValidationError as exc:
        raise _Fail(EXIT_VALIDATION, str(exc), exc.details) from exc


def _summary(cx) -> dict:
    return {
        "cell_counts": list(cx.cell_counts),
        "dim": cx.dim,
        "euler": euler_characteristic(cx),
        "components": num_components(cx),
    }


def _homology_facts(cx, coeff: str, reduced: bool) -> dict:
    if coeff == "q":
        return {"coeff": "q", "reduced": reduced, "betti": list(betti(cx, reduced=reduced))}
    h = integral_homology(cx, reduced=reduced)
    d = h.as_dict()
    return {"coeff": "z", "reduced": reduced, "betti": d["betti"], "torsion": d["torsion"], "groups": d["groups"]}


# -- commands -----------------------------------------------------------------


def cmd_build(args) -> tuple[dict, list[io.InputDocument], str]:
    doc = _load(args.path)
    cx = doc.complex
    results = {**_summary(cx), "valid": True}
    if args.out:
        io.write_complex(cx, args.out)
        results["out"] = args.out
    return results, [doc], f"valid complex, cell counts {tuple(cx.cell_counts)}"


def cmd_homology(args):
    doc = _load(args.path)
    results = _homology_facts(doc.complex, args.coeff, args.reduced)
    text = " ".join(results.get("groups", [str(b) for b in results["betti"]]))
    return results, [doc], f"H_* = {text}"


def cmd_quotient(args):
    doc = _load(args.path)
    if doc.action is None:
        raise _Fail(EXIT_ACTION, "input has no action block")
    try:
        action = io.action_from_spec(doc.complex, doc.action, args.cap_group_order)
        orbits = orbits_and_stabilizers(action)
        q = quotient(doc.complex, action)
        check = invariant_rank_check(action) if args.verify_18_1 else None
    except io.SchemaError as exc:
        raise _Fail(EXIT_SCHEMA, str(exc)) from exc
    except (ActionError, GroupTooLarge, QuotientError) as exc:
        raise _Fail(EXIT_ACTION, str(exc)) from exc
    qh = integral_homology(q.quotient).as_dict()
    results = {
        "group_order": action.order,
        "strict": action.is_strict(),
        "orbit_counts": list(orbits.orbit_counts()),
        "subdivisions_applied": q.subdivisions_applied,
        "quotient_cell_counts": list(q.quotient.cell_counts),
        "quotient_betti": qh["betti"],
        "quotient_torsion": qh["torsion"],
        "quotient_groups": qh["groups"],
    }
    if check is not None:
        results["invariant_rank_check"] = check
    if args.out:
        io.write_complex(q.quotient, args.out)
        results["out"] = args.out
    if check is not None and not check["ok"]:
        raise _Fail(EXIT_ACTION, "invariant ranks disagree with quotient Betti numbers", [str(check)])
    return results, [doc], f"|G| = {action.order}, quotient H_* = {' '.join(qh['groups'])}"


def cmd_pi1(args):
    doc = _load(args.path)
    try:
        p = presentation(doc.complex)
    except DisconnectedError as exc:
        raise _Fail(EXIT_CONNECTIVITY, str(exc)) from exc
    try:
        probe = low_index_probe(p, args.max_index, args.cap_coset_table)
    except ValueError as exc:
        raise _Fail(EXIT_SCHEMA, str(exc)) from exc
    ab = abelianization(p)
    results = {
        "presentation": {"generators": len(p.generators), "relators": len(p.relators)},
        "simplified": probe.simplified.as_dict(),
        "simplified_text": str(probe.simplified),
        "abelianization": {"rank": ab.rank, "torsion": list(ab.torsion), "text": str(ab)},
        "probe": probe.as_dict(),
        "pi1_verdict": probe.verdict,
        "pi1_order": probe.order,
    }
    return results, [doc], f"pi_1 = {probe.simplified}; {probe.verdict}" + (f"({probe.order})" if probe.order else "")


def cmd_check(args):
    doc = _load(args.path)
    cx = doc.complex
    code = EXIT_OK
    if args.mode == "collapse":
        rep = collapse(cx, retries=args.retries, seed=args.seed)
        results = {"mode": "collapse", **rep.as_dict()}
        return results, [doc], f"collapsed_to_point = {rep.collapsed_to_point}", code
    if args.mode == "sphere-quotient":
        verdict = sphere_quotient_report(cx, args.max_index, args.cap_coset_table)
    else:
        if args.dim is None:
            raise _Fail(EXIT_SCHEMA, "--dim is required for cy-degeneration")
        verdict = cy_degeneration_report(cx, args.dim, args.max_index, args.cap_coset_table)
    if verdict.level == INCONSISTENT:
        code = EXIT_INCONSISTENT
    results = {"mode": args.mode, "verdict": verdict.as_dict(), "level": verdict.level}
    if args.dim is not None:
        results["expected_dim"] = args.dim
    return results, [doc], f"{verdict.level}: {'; '.join(verdict.notes)}", code


def _combine(args, docs, cx, what):
    results = _summary(cx)
    if args.out:
        io.write_complex(cx, args.out)
        results["out"] = args.out
    return results, docs, f"{what}: cell counts {tuple(cx.cell_counts)}"


def cmd_join(args):
    a, b = _load(args.path), _load(args.path_b)
    return _combine(args, [a, b], builders.join(a.complex, b.complex), "join")


def cmd_cone(args):
    doc = _load(args.path)
    return _combine(args, [doc], builders.cone(doc.complex, args.apex), "cone")


def cmd_subdivide(args):
    doc = _load(args.path)
    return _combine(args, [doc], iterated_barycentric(doc.complex, args.times), "subdivision")


COMMANDS = {
    "build": cmd_build,
    "homology": cmd_homology,
    "quotient": cmd_quotient,
    "pi1": cmd_pi1,
    "check": cmd_check,
    "join": cmd_join,
    "cone": cmd_cone,
    "subdivide": cmd_subdivide,
}


# -- expected blocks ----------------------------------------------------------


def _normalize(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_normalize(v) for v in value]
    if isinstance(value, list):
        return [_normalize(v) for v in value]
    if isinstance(value, dict):
        return {k: _normalize(v) for k, v in value.items()}
    return value


def _expected_facts(results: dict) -> dict:
    facts = dict(results)
    if "level" in results:
        facts[f"verdict_{results['mode'].replace('-', '_')}"] = results["level"]
    if "collapsed_to_point" in results:
        facts["collapsible"] = results["collapsed_to_point"]
    return facts


def check_expected(expected: dict, results: dict) -> dict:
    """Compare declared values with results; keys the command did not produce are skipped."""
    facts = _expected_facts(results)
    checked, skipped, mismatches = [], [], []
    for key in sorted(expected):
        if key not in facts:
            skipped.append(key)
            continue
        checked.append(key)
        want, got = _normalize(expected[key]), _normalize(facts[key])
        if want != got:
            mismatches.append({"key": key, "expected": want, "actual": got})
    return {"checked": checked, "skipped": skipped, "mismatches": mismatches}


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dualcx", description="Dual complexes: homology, quotients, pi_1 and sphere checks.")
    parser.add_argument("--version", action="version", version=f"dualcx {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--cap-group-order", type=int, default=DEFAULT_CAP, help="largest group to enumerate")
        p.add_argument("--cap-coset-table", type=int, default=DEFAULT_COSET_CAP, help="coset table size limit")
        p.add_argument("--max-index", type=int, default=5, help="low-index subgroup bound (1..10)")
        return p

    p = common(sub.add_parser("build", help="validate an input and summarize the complex"))
    p.add_argument("path")
    p.add_argument("--out")

    p = common(sub.add_parser("homology", help="Betti numbers and torsion"))
    p.add_argument("path")
    p.add_argument("--coeff", choices=("q", "z"), default="z")
    p.add_argument("--reduced", action="store_true")

    p = common(sub.add_parser("quotient", help="orbit quotient by the input's action"))
    p.add_argument("path")
    p.add_argument("--out")
    p.add_argument("--verify-18-1", dest="verify_18_1", action="store_true", help="cross-check invariant ranks against quotient Betti numbers")

    p = common(sub.add_parser("pi1", help="fundamental group presentation and finiteness probe"))
    p.add_argument("path")

    p = common(sub.add_parser("check", help="sphere-quotient, CY-degeneration or collapse checks"))
    p.add_argument("path")
    p.add_argument("--mode", choices=("sphere-quotient", "cy-degeneration", "collapse"), default="sphere-quotient")
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=8)

    p = common(sub.add_parser("join", help="join of two complexes"))
    p.add_argument("path")
    p.add_argument("path_b")
    p.add_argument("--out")

    p = common(sub.add_parser("cone", help="cone over a complex"))
    p.add_argument("path")
    p.add_argument("--apex", default="apex")
    p.add_argument("--out")

    p = common(sub.add_parser("subdivide", help="barycentric subdivision"))
    p.add_argument("path")
    p.add_argument("--times", type=int, default=1)
    p.add_argument("--out")
    return parser


def _flags(args) -> dict:
    skip = {"command", "path", "path_b", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    report: dict[str, Any] = {"tool": "dualcx", "version": __version__, "operation": args.command, "flags": _flags(args)}
    try:
        out = COMMANDS[args.command](args)
    except _Fail as exc:
        report["error"] = {"exit_code": exc.code, "message": str(exc), "details": exc.details}
        stdout.write(io.canonical_json(report))
        print(f"dualcx {args.command}: error: {exc}", file=stderr)
        for d in exc.details:
            print(f"  {d}", file=stderr)
        return exc.code
    except ComplexError as exc:
        report["error"] = {"exit_code": EXIT_VALIDATION, "message": str(exc), "details": []}
        stdout.write(io.canonical_json(report))
        print(f"dualcx {args.command}: error: {exc}", file=stderr)
        return EXIT_VALIDATION
    results, docs, summary = out[:3]
    code = out[3] if len(out) > 3 else EXIT_OK
    report["input_digest"] = docs[0].digest if len(docs) == 1 else [d.digest for d in docs]
    report["results"] = _normalize(results)
    if args.command not in ("join", "cone", "subdivide") and docs[0].expected:
        exp = check_expected(docs[0].expected, results)
        report["expected"] = exp
        if exp["mismatches"]:
            code = EXIT_MISMATCH
            summary += f"; {len(exp['mismatches'])} expected value(s) differ"
    stdout.write(io.canonical_json(report))
    print(f"dualcx {args.command}: {summary}", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
