"""Finite group actions on Delta-complexes and their quotients.

An automorphism is a tuple of per-dimension permutations of cell indices.
It must respect faces up to the vertex reordering it induces: if ``g`` sends
the i-th vertex of a cell to position ``pi(i)`` of the image cell, then
``g(face_i c) == face_pi(i)(g c)``.  The induced chain map carries the sign of
``pi``.  Actions with every ``pi`` the identity are called *strict*; only
those descend to a Delta-complex structure on the orbit space.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .complex import CellId, ComplexError, DeltaComplex, validate
from .homology import betti, homology_basis, induced_trace
from .subdivision import SimplicialComplex, barycentric, induced_action

logger = logging.getLogger(__name__)

Perm = tuple[tuple[int, ...], ...]

DEFAULT_CAP = 10_000


class ActionError(ValueError):
    """Generator is not an automorphism, or the action breaks a required property."""


class GroupTooLarge(RuntimeError):
    pass


class QuotientError(RuntimeError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _perm_sign(p: Sequence[int]) -> int:
    seen = [False] * len(p)
    sign = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def identity(complex: DeltaComplex) -> Perm:
    return tuple(tuple(range(n)) for n in complex.cell_counts)


def compose(g: Perm, h: Perm) -> Perm:
    """g after h."""
    return tuple(tuple(gk[x] for x in hk) for gk, hk in zip(g, h))


def inverse(g: Perm) -> Perm:
    out = []
    for gk in g:
        inv = [0] * len(gk)
        for i, x in enumerate(gk):
            inv[x] = i
        out.append(tuple(inv))
    return tuple(out)


def check_automorphism(complex: DeltaComplex, g: Perm) -> None:
    """Raise :class:`ActionError` unless ``g`` is a face-respecting bijection."""
    if len(g) != len(complex.faces) or any(len(gk) != n for gk, n in zip(g, complex.cell_counts)):
        raise ActionError("permutation does not match the cell counts")
    for k, gk in enumerate(g):
        if sorted(gk) != list(range(len(gk))):
            raise ActionError(f"dimension {k} map is not a bijection")
    for k in range(1, len(complex.faces)):
        for i in range(complex.count(k)):
            src = complex.vertex_indices(CellId(k, i))
            dst = complex.vertex_indices(CellId(k, g[k][i]))
            pos = {v: n for n, v in enumerate(dst)}
            try:
                pi = [pos[g[0][v]] for v in src]
            except KeyError:
                raise ActionError(f"{CellId(k, i)} and its image have different vertices") from None
            for a in range(k + 1):
                if g[k - 1][complex.faces[k][i][a]] != complex.faces[k][g[k][i]][pi[a]]:
                    raise ActionError(f"face {a} of {CellId(k, i)} is not sent to a face of its image")


def orientation_signs(complex: DeltaComplex, g: Perm) -> Perm:
    out = [tuple(1 for _ in range(complex.count(0)))]
    for k in range(1, len(complex.faces)):
        row = []
        for i in range(complex.count(k)):
            dst = complex.vertex_indices(CellId(k, g[k][i]))
            pos = {v: n for n, v in enumerate(dst)}
            row.append(_perm_sign([pos[g[0][v]] for v in complex.vertex_indices(CellId(k, i))]))
        out.append(tuple(row))
    return tuple(out)


def is_strict(complex: DeltaComplex, g: Perm) -> bool:
    return all(s == 1 for level in orientation_signs(complex, g) for s in level)


def perm_from_vertex_map(complex: DeltaComplex, vmap: Sequence[int], cells: Mapping[CellId, CellId] | None = None) -> Perm:
    """Extend a vertex permutation to all cells by matching face sets.

    ``cells`` pins images explicitly where face sets do not determine them.
    """
    cells = {CellId(*k): CellId(*v) for k, v in (cells or {}).items()}
    g = [tuple(vmap)]
    for k in range(1, len(complex.faces)):
        lookup: dict[tuple[int, ...], list[int]] = {}
        for j, f in enumerate(complex.faces[k]):
            lookup.setdefault(tuple(sorted(f)), []).append(j)
        row = []
        for i, f in enumerate(complex.faces[k]):
            if CellId(k, i) in cells:
                row.append(cells[CellId(k, i)].index)
                continue
            key = tuple(sorted(g[k - 1][t] for t in f))
            cand = lookup.get(key, [])
            if len(cand) != 1:
                what = "no" if not cand else "several"
                raise ActionError(f"{what} candidate images for {CellId(k, i)}; give an explicit cell map")
            row.append(cand[0])
        g.append(tuple(row))
    return tuple(g)


@dataclass(frozen=True)
class GroupAction:
    """A finite group given by generators acting on ``complex``."""

    complex: DeltaComplex
    generators: tuple[Perm, ...]
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        gens = tuple(tuple(tuple(x) for x in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            check_automorphism(self.complex, g)

    @classmethod
    def from_vertex_maps(cls, complex: DeltaComplex, vmaps: Sequence[Sequence[int]], cap: int = DEFAULT_CAP) -> "GroupAction":
        return cls(complex, tuple(perm_from_vertex_map(complex, v) for v in vmaps), cap)

    @classmethod
    def trivial(cls, complex: DeltaComplex) -> "GroupAction":
        return cls(complex, ())

    @cached_property
    def elements(self) -> tuple[Perm, ...]:
        """All group elements, identity first, in breadth-first order."""
        e = identity(self.complex)
        seen = {e: 0}
        out = [e]
        queue = deque([e])
        while queue:
            h = queue.popleft()
            for g in self.generators:
                x = compose(g, h)
                if x not in seen:
                    if len(out) >= self.cap:
                        raise GroupTooLarge(f"group too large: more than {self.cap} elements")
                    seen[x] = len(out)
                    out.append(x)
                    queue.append(x)
        return tuple(out)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def signs(self) -> tuple[Perm, ...]:
        return tuple(orientation_signs(self.complex, g) for g in self.elements)

    def is_strict(self) -> bool:
        return all(is_strict(self.complex, g) for g in self.generators)

    def is_free(self) -> bool:
        """No non-identity element maps a cell to itself."""
        return all(
            all(gk[i] != i for gk in g for i in range(len(gk))) for g in self.elements[1:]
        )

    def vertex_permutations(self) -> tuple[tuple[int, ...], ...]:
        return tuple(g[0] if g else () for g in self.generators)


def enumerate_group(action: GroupAction) -> int:
    """Order of the group; raises :class:`GroupTooLarge` past the cap."""
    return action.order


@dataclass(frozen=True)
class OrbitData:
    orbit_of: dict[CellId, int]
    orbits: tuple[tuple[CellId, ...], ...]
    stabilizers: dict[CellId, tuple[int, ...]]
    group_order: int

    def orbit_counts(self) -> tuple[int, ...]:
        counts: dict[int, int] = {}
        for orb in self.orbits:
            counts[orb[0].dim] = counts.get(orb[0].dim, 0) + 1
        return tuple(counts.get(k, 0) for k in range(max(counts, default=-1) + 1))


def orbits_and_stabilizers(action: GroupAction) -> OrbitData:
    """Orbit partition of the cells and the stabilizer (element indices) of each."""
    elements = action.elements
    orbit_of: dict[CellId, int] = {}
    orbits: list[tuple[CellId, ...]] = []
    stabilizers: dict[CellId, tuple[int, ...]] = {}
    for c in action.complex.cells():
        stabilizers[c] = tuple(n for n, g in enumerate(elements) if g[c.dim][c.index] == c.index)
        if c in orbit_of:
            continue
        members = sorted({CellId(c.dim, g[c.dim][c.index]) for g in elements})
        for m in members:
            orbit_of[m] = len(orbits)
        orbits.append(tuple(members))
    return OrbitData(orbit_of, tuple(orbits), stabilizers, len(elements))


@dataclass(frozen=True)
class QuotientResult:
    quotient: DeltaComplex
    projection: dict[CellId, CellId]
    regular: bool
    subdivisions_applied: int
    source: DeltaComplex = field(repr=False)
    action: GroupAction = field(repr=False)


def _orbit_quotient(action: GroupAction) -> tuple[DeltaComplex, dict[CellId, CellId]]:
    cx = action.complex
    data = orbits_and_stabilizers(action)
    # orbits are discovered in (dim, index) order, so numbering by discovery keeps min-representative order
    proj: dict[CellId, CellId] = {}
    reps: list[list[CellId]] = [[] for _ in range(cx.dim + 1)]
    for orb in data.orbits:
        k = orb[0].dim
        new = CellId(k, len(reps[k]))
        reps[k].append(orb[0])
        for c in orb:
            proj[c] = new
    faces = []
    for k, level in enumerate(reps):
        if k == 0:
            faces.append(tuple(() for _ in level))
        else:
            faces.append(tuple(tuple(proj[cx.face(rep, i)].index for i in range(k + 1)) for rep in level))
    labels = []
    for k, level in enumerate(reps):
        labels.append(tuple("[" + cx.label(rep) + "]" for rep in level))
    return DeltaComplex(tuple(faces), tuple(labels)), proj


def quotient(complex, action: GroupAction, max_subdivisions: int = 2) -> QuotientResult:
    """Orbit complex of a finite action, subdividing when needed.

    The action is quotiented directly when it is strict and the result is
    regular; otherwise the source is barycentrically subdivided (the induced
    action is then strict) and the quotient retried, at most
    ``max_subdivisions`` times.
    """
    if isinstance(complex, SimplicialComplex):
        complex = complex.to_delta()
    if action.complex != complex:
        raise ActionError("action is defined on a different complex")
    current, act, n = complex, action, 0
    witness = None
    while True:
        if act.is_strict():
            q, proj = _orbit_quotient(act)
            report = validate(q)
            if report.ok:
                return QuotientResult(q, proj, True, n, current, act)
            witness = [v.message for v in report.violations[:5]]
        else:
            witness = ["action reorders vertices of some cell"]
        if n >= max_subdivisions:
            raise QuotientError(f"quotient is not regular after {n} subdivisions", witness)
        logger.debug("quotient: subdividing (%s)", witness[0])
        sc, smap = barycentric(current)
        act = induced_action(act, smap)
        current = sc.to_delta()
        n += 1


def descend(outer: GroupAction, result: QuotientResult) -> GroupAction:
    """Action of ``outer`` (normalising the quotiented group) on the quotient.

    ``outer`` must act on the complex originally passed to :func:`quotient`.
    """
    act = outer
    for _ in range(result.subdivisions_applied):
        sc, smap = barycentric(act.complex)
        act = induced_action(act, smap)
    if act.complex != result.source:
        raise ActionError("outer action does not live on the quotient's source")
    q = result.quotient
    gens = []
    for g in act.generators:
        perm = [[-1] * n for n in q.cell_counts]
        for c, img in result.projection.items():
            target = result.projection[CellId(c.dim, g[c.dim][c.index])]
            prev = perm[img.dim][img.index]
            if prev not in (-1, target.index):
                raise ActionError("outer action does not normalise the quotiented group")
            perm[img.dim][img.index] = target.index
        gens.append(tuple(tuple(p) for p in perm))
    return GroupAction(q, tuple(gens), outer.cap)


def invariant_rank(action: GroupAction, degree: int) -> int:
    """Dimension of the G-invariant part of H^degree(K; Q).

    Computed as the average trace of the induced maps on an explicit cycle
    basis (the rational traces on H_i and H^i agree).
    """
    cx = action.complex
    if degree < 0 or degree > cx.dim:
        return 0
    basis = homology_basis(cx, degree)
    if not basis.representatives:
        return 0
    total = Fraction(0)
    for g, s in zip(action.elements, action.signs):
        gk, sk = g[degree], s[degree]
        total += induced_trace(basis, lambda i: (sk[i], gk[i]))
    avg = total / action.order
    if avg.denominator != 1:
        raise ArithmeticError(f"non-integral invariant rank {avg}")
    return int(avg)


def invariant_ranks(action: GroupAction) -> tuple[int, ...]:
    return tuple(invariant_rank(action, k) for k in range(action.complex.dim + 1))


# -- convenience actions on standard complexes --------------------------------


def vertex_map_from_labels(complex: DeltaComplex, mapping: Mapping[str, str]) -> list[int]:
    labels = complex.vertex_labels()
    pos = {x: i for i, x in enumerate(labels)}
    if len(pos) != len(labels):
        raise ActionError("vertex labels are not unique")
    out = list(range(len(labels)))
    for a, b in mapping.items():
        if a not in pos or b not in pos:
            raise ActionError(f"unknown vertex label in {a!r} -> {b!r}")
        out[pos[a]] = pos[b]
    if sorted(out) != list(range(len(out))):
        raise ActionError("vertex map is not a bijection")
    return out


def parse_cycles(text: str) -> dict[str, str]:
    """Cycle notation such as ``(a b c)(d e)`` into a label mapping."""
    mapping: dict[str, str] = {}
    text = text.strip()
    if text in ("", "()"):
        return mapping
    if not (text.startswith("(") and text.endswith(")")):
        raise ActionError(f"bad cycle notation {text!r}")
    for chunk in text[1:-1].split(")("):
        items = chunk.replace(",", " ").split()
        for a, b in zip(items, items[1:] + items[:1]):
            if a in mapping:
                raise ActionError(f"label {a!r} appears twice in {text!r}")
            mapping[a] = b
    return mapping


def action_from_cycles(complex: DeltaComplex, cycles: Sequence[str], cap: int = DEFAULT_CAP) -> GroupAction:
    maps = [vertex_map_from_labels(complex, parse_cycles(c)) for c in cycles]
    return GroupAction.from_vertex_maps(complex, maps, cap)


def antipodal_action(complex: DeltaComplex) -> GroupAction:
    """Swap ``i+`` with ``i-`` on a cross-polytope boundary."""
    labels = complex.vertex_labels()
    mapping = {}
    for x in labels:
        if x.endswith("+"):
            mapping[x] = x[:-1] + "-"
            mapping[x[:-1] + "-"] = x
    return GroupAction.from_vertex_maps(complex, [vertex_map_from_labels(complex, mapping)])


def cyclic_action(complex: DeltaComplex) -> GroupAction:
    """Rotate vertices ``0 -> 1 -> ... -> n-1 -> 0``."""
    n = complex.count(0)
    return GroupAction.from_vertex_maps(complex, [[(i + 1) % n for i in range(n)]])


def cross_rotation_action(complex: DeltaComplex) -> GroupAction:
    """Order-4 map ``1+ -> 2+ -> 1- -> 2- -> 1+`` on a cross-polytope boundary.

    Remaining coordinate pairs are swapped, so the square is the antipodal
    map on the first two coordinates only.
    """
    labels = complex.vertex_labels()
    mapping = {"1+": "2+", "2+": "1-", "1-": "2-", "2-": "1+"}
    for x in labels:
        if x[:-1] not in ("1", "2"):
            mapping[x] = x[:-1] + ("-" if x.endswith("+") else "+")
    return GroupAction.from_vertex_maps(complex, [vertex_map_from_labels(complex, mapping)])


def invariant_rank_check(action: GroupAction) -> dict:
    """Compare invariant ranks against the Betti numbers of the quotient."""
    q = quotient(action.complex, action)
    ranks = invariant_ranks(action)
    qb = betti(q.quotient)
    width = max(len(ranks), len(qb))
    pad = lambda t: tuple(t) + (0,) * (width - len(t))
    return {"invariant_ranks": list(ranks), "quotient_betti": list(qb), "ok": pad(ranks) == pad(qb)}
