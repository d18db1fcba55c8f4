"""Acceptance suite: one PASS/FAIL line per criterion.

Lines are printed as each check finishes and repeated in the pytest
terminal summary.  Run ``python3 tests/test_acceptance.py`` for the lines
alone.
"""

import io
import sys
import time
from contextlib import contextmanager

from dualcx import builders
from dualcx.cli import run
from dualcx.complex import components
from dualcx.fundamental_group import abelianization, pi1_probe, presentation
from dualcx.group_action import antipodal_action, cyclic_action, invariant_rank_check, quotient
from dualcx.homology import betti, euler_characteristic, integral_homology, sphere_betti
from dualcx.io import action_from_spec
from dualcx.recognizer import (
    CONFIRMED_SPHERE,
    INCONSISTENT,
    closed_3_manifold_check,
    collapse,
    cy_degeneration_report,
    greedy_collapse,
    sphere_quotient_report,
)
from dualcx.subdivision import barycentric, induced_action

from conftest import CORPUS, corpus_doc, corpus_files, random_complex

RESULTS: list[str] = []


@contextmanager
def criterion(number, title, limit=None):
    start = time.perf_counter()
    notes = []
    try:
        yield notes
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        status = "PASS"
    except Exception as exc:
        elapsed = time.perf_counter() - start
        notes.append(f"{type(exc).__name__}: {exc}")
        status = "FAIL"
        raise
    finally:
        bound = f" (limit {limit}s)" if limit is not None else ""
        line = f"{status} criterion {number}: {title} [{elapsed:.2f}s{bound}]"
        if notes:
            line += " " + "; ".join(notes)
        RESULTS.append(line)
        print(line)


def _timed(fn, limit):
    start = time.perf_counter()
    out = fn()
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"{fn} took {elapsed:.2f}s"
    return out


def _subdivided_quotient(cx, action_of):
    sc, smap = barycentric(cx)
    return quotient(sc.to_delta(), induced_action(action_of(cx), smap)).quotient


def test_c1_sphere_fixtures():
    with criterion(1, "simplex and cross-polytope boundaries have sphere Betti numbers, each under 5s"):
        for m in range(2, 9):
            cx = builders.simplex_boundary(m)
            assert _timed(lambda: betti(cx), 5) == sphere_betti(m - 2), m
        for n in range(1, 7):
            cx = builders.crosspolytope_boundary(n)
            assert _timed(lambda: betti(cx), 5) == sphere_betti(n - 1), n


def test_c2_antipodal_quotients():
    with criterion(2, "antipodal quotients of subdivided cross-polytopes are RP2 and RP3", limit=30):
        rp2 = integral_homology(_subdivided_quotient(builders.crosspolytope_boundary(3), antipodal_action))
        assert [str(g) for g in rp2] == ["Z", "Z/2", "0"]
        rp3 = integral_homology(_subdivided_quotient(builders.crosspolytope_boundary(4), antipodal_action))
        assert [str(g) for g in rp3] == ["Z", "Z/2", "0", "Z"]


def test_c3_prime_cyclic_quotient():
    with criterion(3, "Z5 quotient of subdivided boundary of the 4-simplex", limit=60) as notes:
        q = _subdivided_quotient(builders.simplex_boundary(5), cyclic_action)
        check = closed_3_manifold_check(q)
        assert check.ok and set(check.links.values()) == {"S2"}
        assert euler_characteristic(q) == 0
        h1 = integral_homology(q)[1]
        assert (h1.rank, h1.torsion) == (0, (5,))
        probe = pi1_probe(q)
        assert (probe.verdict, probe.order) == ("ProvablyFinite", 5)
        q3 = _subdivided_quotient(builders.simplex_boundary(3), cyclic_action)
        p3 = pi1_probe(q3)
        assert p3.verdict == "ProvablyInfinite" and p3.abelianization.rank == 1
        notes.append("p=3: quotient is a circle, pi1 = Z (expected Z/3 does not occur for a 1-dimensional sphere)")


def test_c4_invariant_rank_formula():
    names = ["octahedron_antipodal", "cross4_antipodal", "octahedron_rotation", "lens_5", "cyclic_3", "triangle_s3", "square_trivial"]
    with criterion(4, f"invariant ranks equal quotient Betti numbers on {len(names)} actions") as notes:
        orders = []
        for name in names:
            doc = corpus_doc(name + ".json")
            act = action_from_spec(doc.complex, doc.action)
            orders.append(act.order)
            check = invariant_rank_check(act)
            assert check["ok"], (name, check)
        assert {1, 2, 5, 6} <= set(orders)
        notes.append(f"group orders {sorted(orders)}")


def _conv(a, b, top):
    out = [0] * (top + 1)
    for p, x in enumerate(a):
        for q, y in enumerate(b):
            if p + q + 1 <= top:
                out[p + q + 1] += x * y
    return tuple(out)


def test_c5_join_kunneth():
    with criterion(5, "reduced Betti numbers of joins follow the convolution formula"):
        for seed in range(10):
            a, _ = random_complex(1000 + seed, max_cells=30)
            b, _ = random_complex(2000 + seed, max_cells=30)
            j = builders.join(a, b)
            assert _conv(betti(a, reduced=True), betti(b, reduced=True), j.dim) == betti(j, reduced=True), seed
        tri = builders.simplex_boundary(3)
        assert betti(builders.join(tri, tri)) == (1, 0, 0, 1)


def test_c6_collapsibility():
    with criterion(6, "cones over the corpus collapse; the 3-cycle has no free faces") as notes:
        worst = 0
        for path in corpus_files():
            rep = collapse(builders.cone(corpus_doc(path.name).complex), retries=8)
            assert rep.collapsed_to_point, path.stem
            worst = max(worst, rep.attempts)
        assert greedy_collapse(builders.cycle(3)).steps == ()
        notes.append(f"max attempts {worst}")


def _abelianizations(cx):
    return sorted(tuple(abelianization(presentation(c))) for c in components(cx))


def test_c7_subdivision_invariance():
    with criterion(7, "homology, Euler characteristic and abelianization survive subdivision"):
        for seed in range(20):
            cx, _ = random_complex(5000 + seed, max_cells=50)
            sd = barycentric(cx)[0].to_delta()
            assert integral_homology(sd) == integral_homology(cx), seed
            assert euler_characteristic(sd) == euler_characteristic(cx), seed
            assert _abelianizations(sd) == _abelianizations(cx), seed


def test_c8_abelianization_is_h1():
    with criterion(8, "abelianized edge-path presentation equals H1 on the corpus") as notes:
        checked = 0
        for path in corpus_files():
            cx = corpus_doc(path.name).complex
            for comp in components(cx):
                h1 = integral_homology(comp)[1]
                ab = abelianization(presentation(comp))
                assert (ab.rank, ab.torsion) == (h1.rank, h1.torsion), path.stem
                checked += 1
        notes.append(f"{checked} connected components")


def test_c9_verdict_soundness():
    with criterion(9, "recognizer verdicts are sound on spheres, quotients and the torus"):
        assert sphere_quotient_report(corpus_doc("torus.json").complex).level == INCONSISTENT
        fixtures = [builders.simplex_boundary(m) for m in range(2, 7)]
        fixtures += [builders.crosspolytope_boundary(n) for n in range(1, 5)]
        for path in corpus_files():
            doc = corpus_doc(path.name)
            if doc.action is not None:
                fixtures.append(quotient(doc.complex, action_from_spec(doc.complex, doc.action)).quotient)
        for cx in fixtures:
            assert sphere_quotient_report(cx).level != INCONSISTENT
        octa = corpus_doc("octahedron.json").complex
        assert cy_degeneration_report(octa, 2).level == CONFIRMED_SPHERE


ACCEPTANCE_COMMANDS = [
    ["build", "simplex_boundary_6.json"],
    ["homology", "cross4_antipodal.json"],
    ["quotient", "octahedron_antipodal.json", "--verify-18-1"],
    ["quotient", "lens_5.json", "--verify-18-1"],
    ["pi1", "octahedron_rotation.json"],
    ["check", "torus.json"],
    ["check", "octahedron.json", "--mode", "cy-degeneration", "--dim", "2"],
    ["check", "cone_tetrahedron.json", "--mode", "collapse"],
    ["join", "cycle_3.json", "cycle_3.json"],
]


def _report(argv):
    out = io.StringIO()
    code = run([argv[0]] + [str(CORPUS / a) if a.endswith(".json") else a for a in argv[1:]], stdout=out, stderr=io.StringIO())
    return code, out.getvalue()


def test_c10_determinism():
    with criterion(10, "CLI reports are byte-identical across runs") as notes:
        for argv in ACCEPTANCE_COMMANDS:
            first, second = _report(argv), _report(argv)
            assert first == second, argv
            assert first[0] in (0, 6), (argv, first)
        notes.append(f"{len(ACCEPTANCE_COMMANDS)} commands")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except Exception:
                failed += 1
    sys.exit(1 if failed else 0)
