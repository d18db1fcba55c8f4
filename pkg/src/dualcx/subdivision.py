"""Abstract simplicial complexes and barycentric subdivision.

The subdivision of a regular Delta-complex is its order complex: one vertex
per cell, one simplex per chain of cells under the iterated-face relation.
Subdivision vertices are numbered in (dimension, index) order of the cells,
so sorting a chain by vertex number sorts it by cell dimension as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Any, Hashable, Iterable, Sequence

from .complex import CellId, ComplexError, DeltaComplex


@dataclass(frozen=True)
class SimplicialComplex:
    """Vertices plus maximal simplices; lower faces are implicit."""

    vertices: tuple[Hashable, ...]
    facets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        facets = tuple(tuple(f) for f in self.facets)
        if len(set(facets)) != len(facets):
            raise ComplexError("duplicate facets")
        n = len(self.vertices)
        for f in facets:
            if len(set(f)) != len(f):
                raise ComplexError(f"facet {f} repeats a vertex")
            if list(f) != sorted(f):
                raise ComplexError(f"facet {f} is not sorted")
            if any(not 0 <= v < n for v in f):
                raise ComplexError(f"facet {f} references a missing vertex")
        object.__setattr__(self, "facets", facets)

    @classmethod
    def from_simplices(cls, vertices: Sequence[Hashable], simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Build from any simplex list: sorts, dedups and keeps maximal ones.

        Vertices not covered by any simplex become isolated 0-simplices.
        """
        uniq = {tuple(sorted(s)) for s in simplices if len(tuple(s))}
        by_size = sorted(uniq, key=lambda s: (-len(s), s))
        kept: list[tuple[int, ...]] = []
        covered: set[tuple[int, ...]] = set()
        for s in by_size:
            if s in covered:
                continue
            kept.append(s)
            for r in range(1, len(s)):
                covered.update(combinations(s, r))
        used = {v for s in kept for v in s}
        kept.extend((v,) for v in range(len(vertices)) if v not in used)
        return cls(tuple(vertices), tuple(sorted(kept)))

    @property
    def dim(self) -> int:
        return max((len(f) - 1 for f in self.facets), default=-1)

    @cached_property
    def simplices(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """All simplices grouped by dimension, each level sorted."""
        levels: list[set[tuple[int, ...]]] = [set() for _ in range(self.dim + 1)]
        for f in self.facets:
            for r in range(1, len(f) + 1):
                levels[r - 1].update(combinations(f, r))
        return tuple(tuple(sorted(level)) for level in levels)

    def to_delta(self) -> DeltaComplex:
        return self._delta

    @cached_property
    def _delta(self) -> DeltaComplex:
        levels = self.simplices
        index = [{s: i for i, s in enumerate(level)} for level in levels]
        faces = []
        for k, level in enumerate(levels):
            if k == 0:
                faces.append(tuple(() for _ in level))
                continue
            faces.append(tuple(tuple(index[k - 1][s[:j] + s[j + 1:]] for j in range(k + 1)) for s in level))
        labels = tuple(
            tuple("|".join(_tag(self.vertices[v]) for v in s) for s in level) for level in levels
        )
        return DeltaComplex(tuple(faces), labels)

    def simplex_index(self, simplex: Iterable[int]) -> CellId:
        s = tuple(sorted(simplex))
        k = len(s) - 1
        return CellId(k, self.to_delta_index[k][s])

    @cached_property
    def to_delta_index(self) -> tuple[dict[tuple[int, ...], int], ...]:
        return tuple({s: i for i, s in enumerate(level)} for level in self.simplices)

    def validate(self) -> list[str]:
        """Problems with the simplicial invariants (empty when fine)."""
        problems = []
        if len(set(self.facets)) != len(self.facets):
            problems.append("duplicate facets")
        fs = set(self.facets)
        for f in self.facets:
            if len(set(f)) != len(f):
                problems.append(f"facet {f} repeats a vertex")
            for r in range(1, len(f)):
                for sub in combinations(f, r):
                    if sub in fs:
                        problems.append(f"facet {sub} is a face of {f}")
        return problems

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={len(self.vertices)}, facets={len(self.facets)})"


def _tag(v: Any) -> str:
    if isinstance(v, CellId):
        return str(v)
    return str(v)


@dataclass(frozen=True)
class SubdivisionMap:
    """Cell -> subdivision vertex, plus the chain witness for each simplex."""

    source: DeltaComplex
    vertex_of: dict[CellId, int]

    @cached_property
    def cell_of(self) -> dict[int, CellId]:
        return {v: c for c, v in self.vertex_of.items()}

    def chain(self, simplex: Iterable[int]) -> tuple[CellId, ...]:
        """Cells of a subdivision simplex, strictly increasing in dimension."""
        return tuple(self.cell_of[v] for v in sorted(simplex))

    def check_chain(self, simplex: Iterable[int]) -> bool:
        chain = self.chain(simplex)
        for lo, hi in zip(chain, chain[1:]):
            if not lo.dim < hi.dim or lo not in self.source.closure[hi.dim][hi.index]:
                return False
        return True


def barycentric(complex: DeltaComplex) -> tuple[SimplicialComplex, SubdivisionMap]:
    """Order complex of the face poset of ``complex``.

    Incidence multiplicity is collapsed: a cell that is a face of another in
    several ways contributes a single poset relation.
    """
    vertex_of: dict[CellId, int] = {}
    tags: list[CellId] = []
    for c in complex.cells():
        vertex_of[c] = len(tags)
        tags.append(c)
    has_coface = [[bool(cf) for cf in level] for level in complex.cofaces]
    chains: list[tuple[int, ...]] = []
    for top in complex.cells():
        if has_coface[top.dim][top.index]:
            continue
        stack = [(top, (vertex_of[top],))]
        while stack:
            cell, chain = stack.pop()
            if cell.dim == 0:
                chains.append(tuple(sorted(chain)))
                continue
            for t in sorted(set(complex.faces[cell.dim][cell.index])):
                below = CellId(cell.dim - 1, t)
                stack.append((below, chain + (vertex_of[below],)))
    sc = SimplicialComplex.from_simplices(tuple(tags), chains)
    return sc, SubdivisionMap(complex, vertex_of)


def iterated_barycentric(complex: DeltaComplex, times: int) -> DeltaComplex:
    out = complex
    for _ in range(times):
        out = barycentric(out)[0].to_delta()
    return out


def induced_action(action, smap: SubdivisionMap):
    """Transport a cell-level action to the barycentric subdivision.

    Returns a :class:`~dualcx.group_action.GroupAction` on
    ``barycentric(source)[0].to_delta()``.  Every element that maps a
    subdivision simplex to itself must fix each of its vertices; a violation
    raises :class:`~dualcx.group_action.ActionError`.
    """
    from .group_action import ActionError, GroupAction

    if action.complex != smap.source:
        raise ActionError("action and subdivision map refer to different complexes")
    sc, _ = barycentric(smap.source)
    target = sc.to_delta()
    index = sc.to_delta_index

    def push(perm) -> tuple[tuple[int, ...], ...]:
        vmap = [0] * len(sc.vertices)
        for c, v in smap.vertex_of.items():
            vmap[v] = smap.vertex_of[CellId(c.dim, perm[c.dim][c.index])]
        levels = []
        for k, level in enumerate(sc.simplices):
            levels.append(tuple(index[k][tuple(sorted(vmap[v] for v in s))] for s in level))
        return tuple(levels)

    gens = tuple(push(g) for g in action.generators)
    out = GroupAction(target, gens, cap=action.cap)
    check_fixed_simplex_property(out, sc)
    return out


def check_fixed_simplex_property(action, sc: SimplicialComplex) -> None:
    """Any element stabilizing a simplex setwise must fix its vertices."""
    from .group_action import ActionError

    for g in action.elements:
        vperm = g[0]
        for k, level in enumerate(sc.simplices):
            if k == 0:
                continue
            for i, s in enumerate(level):
                if g[k][i] == i and any(vperm[v] != v for v in s):
                    raise ActionError(f"element stabilizes simplex {s} without fixing its vertices")
