"""Collapses, low-dimensional manifold checks and sphere-quotient verdicts.

Verdicts only ever claim what was checked: spheres are confirmed in
dimension <= 2, dimension 3 tops out at ``CandidateSphere``, and
``Inconsistent`` always names the necessary condition that failed.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple

from .complex import CellId, ComplexError, DeltaComplex, components, dimension_profile, link, num_components, subcomplex
from .fundamental_group import DisconnectedError, pi1_probe
from .homology import betti, euler_characteristic, integral_homology, is_rational_homology_sphere

CONFIRMED_SPHERE = "ConfirmedSphere"
CANDIDATE_SPHERE = "CandidateSphere"
SPHERE_QUOTIENT_CANDIDATE = "SphereQuotientCandidate"
CONSISTENT = "ConsistentWithConjecture"
INCONSISTENT = "Inconsistent"
UNKNOWN = "Unknown"

LEVELS = (CONFIRMED_SPHERE, CANDIDATE_SPHERE, SPHERE_QUOTIENT_CANDIDATE, CONSISTENT, INCONSISTENT, UNKNOWN)

DEFAULT_RETRIES = 8


# -- collapses ---------------------------------------------------------------


@dataclass(frozen=True)
class CollapseReport:
    steps: tuple[tuple[CellId, CellId], ...]
    residual: DeltaComplex
    collapsed_to_point: bool
    seed: int | None = None
    attempts: int = 1

    def as_dict(self) -> dict:
        return {
            "steps": len(self.steps),
            "residual_cell_counts": list(self.residual.cell_counts),
            "collapsed_to_point": self.collapsed_to_point,
            "seed": self.seed,
            "attempts": self.attempts,
        }


class _CollapseState:
    def __init__(self, complex: DeltaComplex):
        self.cx = complex
        self.alive = {c: True for c in complex.cells()}
        self.count = {c: len(complex.cofaces[c.dim][c.index]) for c in complex.cells()}

    def coface(self, c: CellId) -> CellId | None:
        for j, _ in self.cx.cofaces[c.dim][c.index]:
            t = CellId(c.dim + 1, j)
            if self.alive[t]:
                return t
        return None

    def free_pair(self, c: CellId) -> CellId | None:
        if not self.alive[c] or self.count[c] != 1:
            return None
        t = self.coface(c)
        if t is None or self.count[t] != 0:
            return None
        return t

    def remove(self, c: CellId, t: CellId) -> list[CellId]:
        """Delete c and t; return cells whose freeness may have changed."""
        touched = []
        for cell in (t, c):
            self.alive[cell] = False
            if cell.dim == 0:
                continue
            for f in self.cx.faces[cell.dim][cell.index]:
                fc = CellId(cell.dim - 1, f)
                self.count[fc] -= 1
                if self.alive[fc]:
                    touched.append(fc)
                    if self.count[fc] == 0 and fc.dim > 0:
                        touched.extend(
                            CellId(fc.dim - 1, g) for g in self.cx.faces[fc.dim][fc.index] if self.alive[CellId(fc.dim - 1, g)]
                        )
        return touched

    def residual(self) -> DeltaComplex:
        return subcomplex(self.cx, [c for c, a in self.alive.items() if a])[0]


def greedy_collapse(complex: DeltaComplex, seed: int | None = None) -> CollapseReport:
    """Remove free pairs, lowest dimension first.

    Ties go to the lowest cell index, or to a seeded random priority when
    ``seed`` is given.  Failing to reach a point proves nothing.
    """
    state = _CollapseState(complex)
    if seed is None:
        prio = {c: c.index for c in complex.cells()}
    else:
        rng = random.Random(seed)
        prio = {c: rng.random() for c in complex.cells()}
    heap = [(c.dim, prio[c], c) for c in complex.cells() if state.count[c] == 1]
    heapq.heapify(heap)
    steps = []
    while heap:
        _, _, c = heapq.heappop(heap)
        t = state.free_pair(c)
        if t is None:
            continue
        steps.append((c, t))
        for x in state.remove(c, t):
            if state.count[x] == 1:
                heapq.heappush(heap, (x.dim, prio[x], x))
    residual = state.residual()
    return CollapseReport(tuple(steps), residual, residual.cell_counts == (1,), seed)


def collapse(complex: DeltaComplex, retries: int = DEFAULT_RETRIES, seed: int = 0) -> CollapseReport:
    """Deterministic greedy collapse, then up to ``retries`` seeded reorderings."""
    report = greedy_collapse(complex)
    attempts = 1
    s = seed
    while not report.collapsed_to_point and attempts <= retries:
        report = greedy_collapse(complex, s)
        attempts += 1
        s += 1
    return CollapseReport(report.steps, report.residual, report.collapsed_to_point, report.seed, attempts)


def replay_collapse(complex: DeltaComplex, steps) -> DeltaComplex:
    """Re-run a collapse log, checking each step is an elementary collapse."""
    state = _CollapseState(complex)
    for c, t in steps:
        c, t = CellId(*c), CellId(*t)
        if state.free_pair(c) != t:
            raise ComplexError(f"({tuple(c)}, {tuple(t)}) is not an elementary collapse here")
        state.remove(c, t)
    return state.residual()


# -- low-dimensional recognition ----------------------------------------------


def is_circle(complex: DeltaComplex) -> bool:
    """Connected 1-complex in which every vertex meets exactly two edge ends."""
    if complex.dim != 1 or num_components(complex) != 1:
        return False
    degree = [0] * complex.count(0)
    for f in complex.faces[1]:
        for v in f:
            degree[v] += 1
    return all(d == 2 for d in degree)


def is_arc(complex: DeltaComplex) -> bool:
    """PL interval: a connected tree with all vertex degrees <= 2."""
    if complex.dim != 1 or num_components(complex) != 1 or euler_characteristic(complex) != 1:
        return False
    degree = [0] * complex.count(0)
    for f in complex.faces[1]:
        for v in f:
            degree[v] += 1
    return max(degree) <= 2


class SurfaceType(NamedTuple):
    kind: str  # S2 | RP2 | T2 | Klein | other | not-closed
    euler: int | None
    orientable: bool | None
    witness: str = ""

    def as_dict(self) -> dict:
        return {"kind": self.kind, "euler": self.euler, "orientable": self.orientable, "witness": self.witness}


def _edge_incidences(complex: DeltaComplex) -> list[list[tuple[int, int]]]:
    inc: list[list[tuple[int, int]]] = [[] for _ in range(complex.count(1))]
    for t, f in enumerate(complex.faces[2]):
        for pos, e in enumerate(f):
            inc[e].append((t, pos))
    return inc


def _orientable(complex: DeltaComplex) -> bool:
    inc = _edge_incidences(complex)
    orient: dict[int, int] = {}
    for start in range(complex.count(2)):
        if start in orient:
            continue
        orient[start] = 1
        stack = [start]
        while stack:
            t = stack.pop()
            for pos, e in enumerate(complex.faces[2][t]):
                for u, upos in inc[e]:
                    if (u, upos) == (t, pos):
                        continue
                    # induced edge orientations must cancel
                    want = -orient[t] * (-1) ** pos * (-1) ** upos
                    if u in orient:
                        if orient[u] != want:
                            return False
                    else:
                        orient[u] = want
                        stack.append(u)
    return True


def _vertex_link_complex(complex: DeltaComplex, v: int) -> DeltaComplex:
    return link(complex, CellId(0, v)).to_delta()


def classify_surface(complex: DeltaComplex) -> SurfaceType:
    """Closed-surface test, then classification by Euler characteristic and orientability."""
    if complex.dim != 2:
        raise ComplexError(f"classify_surface needs a 2-dimensional complex, got dimension {complex.dim}")
    top = set()
    for i in range(complex.count(2)):
        top |= complex.closure[2][i]
    missing = [c for c in complex.cells() if c not in top]
    if missing:
        return SurfaceType("not-closed", None, None, f"cell {tuple(missing[0])} lies in no 2-cell")
    for e, inc in enumerate(_edge_incidences(complex)):
        if len(inc) != 2:
            return SurfaceType("not-closed", None, None, f"edge {e} lies in {len(inc)} 2-cells")
    for v in range(complex.count(0)):
        if not is_circle(_vertex_link_complex(complex, v)):
            return SurfaceType("not-closed", None, None, f"link of vertex {v} is not a circle")
    chi = euler_characteristic(complex)
    orientable = _orientable(complex)
    ncomp = num_components(complex)
    if ncomp != 1:
        return SurfaceType("other", chi, orientable, f"{ncomp} components")
    kind = {(2, True): "S2", (1, False): "RP2", (0, True): "T2", (0, False): "Klein"}.get((chi, orientable), "other")
    return SurfaceType(kind, chi, orientable)


def is_disk(complex: DeltaComplex) -> bool:
    """Connected surface with boundary and Euler characteristic 1."""
    if complex.dim != 2 or num_components(complex) != 1 or euler_characteristic(complex) != 1:
        return False
    top = set()
    for i in range(complex.count(2)):
        top |= complex.closure[2][i]
    if len(top) != complex.num_cells:
        return False
    if any(len(inc) not in (1, 2) for inc in _edge_incidences(complex)):
        return False
    for v in range(complex.count(0)):
        lk = _vertex_link_complex(complex, v)
        if not (is_circle(lk) or is_arc(lk)):
            return False
    return True


class ManifoldCheck(NamedTuple):
    ok: bool
    links: dict[int, str]
    witness: str = ""

    def as_dict(self) -> dict:
        return {"ok": self.ok, "links": {str(k): v for k, v in sorted(self.links.items())}, "witness": self.witness}


def closed_3_manifold_check(complex: DeltaComplex) -> ManifoldCheck:
    """Every vertex link is a 2-sphere and every 2-cell has two cofaces."""
    if complex.dim != 3:
        return ManifoldCheck(False, {}, f"dimension is {complex.dim}, not 3")
    witness = ""
    for i, cf in enumerate(complex.cofaces[2]):
        if len(cf) != 2:
            witness = f"2-cell {i} has {len(cf)} cofaces"
            break
    links = {}
    for v in range(complex.count(0)):
        lk = _vertex_link_complex(complex, v)
        links[v] = classify_surface(lk).kind if lk.dim == 2 else f"dimension {lk.dim}"
        if links[v] != "S2" and not witness:
            witness = f"link of vertex {v} is {links[v]}"
    return ManifoldCheck(not witness, links, witness)


# -- named checks and verdicts ------------------------------------------------


def _probe(complex: DeltaComplex, max_index: int = 5, cap: int = 1_000_000) -> dict:
    try:
        return pi1_probe(complex, max_index, cap).as_dict()
    except DisconnectedError as exc:
        return {"verdict": UNKNOWN, "witness": str(exc)}


def _vanishing(complex: DeltaComplex) -> dict:
    b = betti(complex)
    bad = [i for i in range(1, complex.dim) if b[i] != 0]
    return {"ok": not bad, "failing_degrees": bad, "betti": list(b)}


def _pseudomanifold(complex: DeltaComplex) -> dict:
    d = complex.dim
    if d < 1:
        return {"ok": False, "counts": {}}
    hist: dict[int, int] = {}
    for cf in complex.cofaces[d - 1]:
        hist[len(cf)] = hist.get(len(cf), 0) + 1
    return {"ok": set(hist) == {2}, "counts": {str(k): v for k, v in sorted(hist.items())}}


CHECKS: dict[str, Callable[..., Any]] = {
    "cell_counts": lambda cx: list(cx.cell_counts),
    "components": lambda cx: num_components(cx),
    "dimension_profile": lambda cx: [[p.dim, p.equidimensional] for p in dimension_profile(cx)],
    "betti": lambda cx: list(betti(cx)),
    "integral_homology": lambda cx: integral_homology(cx).as_dict(),
    "vanishing_range": _vanishing,
    "rational_homology_sphere": lambda cx, n: is_rational_homology_sphere(cx, n).as_dict(),
    "pseudomanifold": _pseudomanifold,
    "pi1_probe": _probe,
    "circle": is_circle,
    "arc": is_arc,
    "surface": lambda cx: classify_surface(cx).as_dict(),
    "disk": is_disk,
    "manifold3": lambda cx: closed_3_manifold_check(cx).as_dict(),
    "dimension": lambda cx: cx.dim,
    "euler_characteristic": euler_characteristic,
}


@dataclass
class Verdict:
    level: str
    dimension: int
    evidence: list[tuple[str, dict, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "dimension": self.dimension,
            "evidence": [{"check": n, "params": p, "result": r} for n, p, r in self.evidence],
            "notes": list(self.notes),
        }


class _Recorder:
    def __init__(self, complex: DeltaComplex):
        self.cx = complex
        self.evidence: list[tuple[str, dict, Any]] = []

    def __call__(self, name: str, **params):
        result = CHECKS[name](self.cx, **params)
        self.evidence.append((name, params, result))
        return result

    def verdict(self, level: str, *notes: str) -> Verdict:
        assert level in LEVELS
        return Verdict(level, self.cx.dim, self.evidence, list(notes))


def replay_evidence(complex: DeltaComplex, verdict: Verdict) -> bool:
    """Re-run every recorded check and compare with the stored result."""
    return all(CHECKS[name](complex, **params) == result for name, params, result in verdict.evidence)


def sphere_quotient_report(complex: DeltaComplex, max_index: int = 5, cap: int = 1_000_000) -> Verdict:
    """Necessary conditions for being a finite quotient of a sphere."""
    rec = _Recorder(complex)
    if complex.is_empty:
        return rec.verdict(UNKNOWN, "empty complex")
    rec("cell_counts")
    ncomp = rec("components")
    if ncomp > 1:
        if ncomp == 2 and complex.cell_counts == (2,):
            return rec.verdict(CONFIRMED_SPHERE, "two points: S^0")
        return rec.verdict(INCONSISTENT, "disconnected dual complexes of this kind are S^0")
    d = complex.dim
    if d == 0:
        return rec.verdict(SPHERE_QUOTIENT_CANDIDATE, "a point is S^0 modulo the swap")
    if d == 1:
        if rec("circle"):
            return rec.verdict(CONFIRMED_SPHERE, "circle")
        if rec("arc"):
            return rec.verdict(SPHERE_QUOTIENT_CANDIDATE, "interval is S^1 modulo a reflection")
        return rec.verdict(INCONSISTENT, "a 1-dimensional dual complex must be an interval or a circle")
    profile = rec("dimension_profile")
    if not all(eq for _, eq in profile):
        return rec.verdict(INCONSISTENT, "not of the same dimension at every point")
    van = rec("vanishing_range")
    if not van["ok"]:
        return rec.verdict(INCONSISTENT, f"rational cohomology does not vanish in degrees {van['failing_degrees']}")
    top = van["betti"][d]
    if top > 1:
        return rec.verdict(INCONSISTENT, f"top Betti number {top} exceeds 1")
    rec("integral_homology")
    probe = rec("pi1_probe", max_index=max_index, cap=cap)
    if probe["verdict"] == "ProvablyInfinite":
        return rec.verdict(INCONSISTENT, "fundamental group has infinitely many finite quotients")
    order = probe.get("order")
    if d == 2:
        surf = rec("surface")
        if surf["kind"] == "S2":
            return rec.verdict(CONFIRMED_SPHERE, "closed orientable surface with Euler characteristic 2")
        if surf["kind"] == "RP2":
            return rec.verdict(SPHERE_QUOTIENT_CANDIDATE, f"RP^2 = S^2/Z_2; pi_1 order {order}")
        if surf["kind"] != "not-closed":
            return rec.verdict(INCONSISTENT, f"closed surface of type {surf['kind']} is not a sphere quotient")
        if rec("disk"):
            return rec.verdict(SPHERE_QUOTIENT_CANDIDATE, "disk = S^2 modulo a reflection")
        return rec.verdict(CONSISTENT, "necessary conditions hold; not a surface")
    if d == 3:
        man = rec("manifold3")
        if man["ok"] and probe["verdict"] == "ProvablyFinite":
            if order == 1 and top == 1:
                return rec.verdict(CANDIDATE_SPHERE, "simply connected closed 3-manifold (sphere by Poincare)")
            return rec.verdict(SPHERE_QUOTIENT_CANDIDATE, f"closed 3-manifold with finite pi_1 of order {order}")
        return rec.verdict(CONSISTENT, "necessary conditions hold; structure not certified")
    return rec.verdict(CONSISTENT, "dimension >= 4: homology and pi_1 evidence only")


def cy_degeneration_report(complex: DeltaComplex, n: int, max_index: int = 5, cap: int = 1_000_000) -> Verdict:
    """Checks for the dual complex of a maximal CY degeneration of dimension n."""
    rec = _Recorder(complex)
    if complex.is_empty:
        return rec.verdict(INCONSISTENT if n >= 0 else UNKNOWN, "empty complex")
    rec("cell_counts")
    if rec("dimension") != n:
        return rec.verdict(INCONSISTENT, f"dimension {complex.dim} differs from the expected {n}")
    cert = rec("rational_homology_sphere", n=n)
    if not cert["ok"]:
        return rec.verdict(INCONSISTENT, "not a rational homology sphere")
    if n == 0:
        return rec.verdict(CONFIRMED_SPHERE, "two points")
    if n == 1:
        if rec("circle"):
            return rec.verdict(CONFIRMED_SPHERE, "circle")
        return rec.verdict(CONSISTENT, "rational homology circle that is not a simple cycle")
    probe = rec("pi1_probe", max_index=max_index, cap=cap)
    if probe["verdict"] == "ProvablyInfinite":
        return rec.verdict(INCONSISTENT, "fundamental group is infinite")
    if probe["verdict"] == "ProvablyFinite" and probe["order"] != 1:
        return rec.verdict(INCONSISTENT, f"fundamental group has order {probe['order']}, not simply connected")
    if probe["verdict"] != "ProvablyFinite":
        return rec.verdict(CONSISTENT, "simple connectivity not established")
    if n == 2:
        if rec("surface")["kind"] == "S2":
            return rec.verdict(CONFIRMED_SPHERE, "simply connected closed surface")
        return rec.verdict(CONSISTENT, "simply connected rational homology 2-sphere, not a surface")
    if n == 3:
        if rec("manifold3")["ok"]:
            return rec.verdict(CANDIDATE_SPHERE, "simply connected closed 3-manifold (sphere by Poincare)")
        return rec.verdict(CONSISTENT, "simply connected rational homology 3-sphere, manifold check failed")
    return rec.verdict(CONSISTENT, "dimension >= 4: homology and pi_1 evidence only")
