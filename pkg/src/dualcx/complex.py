"""Regular Delta-complexes: storage, validation, links, components."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence


class CellId(NamedTuple):
    dim: int
    index: int

    def __str__(self) -> str:
        return f"c{self.dim}_{self.index}"


class ComplexError(ValueError):
    """Raised for malformed complexes or bad cell references."""


@dataclass(frozen=True)
class DeltaComplex:
    """A Delta-complex stored as ordered face tuples.

    ``faces[k][i]`` is the tuple of ``k+1`` indices of (k-1)-cells forming the
    faces of the k-cell ``i``; entry ``j`` is the face opposite the ``j``-th
    vertex.  Vertices carry ``faces[0][i] == ()``.  ``labels`` optionally
    names every cell, dimension by dimension.
    """

    faces: tuple[tuple[tuple[int, ...], ...], ...] = ()
    labels: tuple[tuple[str, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        faces = tuple(tuple(tuple(int(x) for x in f) for f in level) for level in self.faces)
        # trailing empty dimensions carry no information
        while faces and not faces[-1]:
            faces = faces[:-1]
        object.__setattr__(self, "faces", faces)
        if self.labels is not None:
            labels = tuple(tuple(str(x) for x in level) for level in self.labels)[: len(faces)]
            for k, level in enumerate(labels):
                if len(level) != len(faces[k]):
                    raise ComplexError(f"label count mismatch in dimension {k}")
            object.__setattr__(self, "labels", labels)
        for k, level in enumerate(faces):
            for i, f in enumerate(level):
                if len(f) != (k + 1 if k else 0):
                    raise ComplexError(f"cell {CellId(k, i)} has {len(f)} faces, expected {k + 1 if k else 0}")

    # -- basic queries -------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    @property
    def is_empty(self) -> bool:
        return not self.faces

    def count(self, k: int) -> int:
        return len(self.faces[k]) if 0 <= k < len(self.faces) else 0

    @property
    def cell_counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.faces)

    @property
    def num_cells(self) -> int:
        return sum(self.cell_counts)

    def cells(self, k: int | None = None) -> Iterator[CellId]:
        dims = range(len(self.faces)) if k is None else [k]
        for d in dims:
            for i in range(self.count(d)):
                yield CellId(d, i)

    def has_cell(self, cell: CellId) -> bool:
        return 0 <= cell[0] < len(self.faces) and 0 <= cell[1] < len(self.faces[cell[0]])

    def face(self, cell: CellId, i: int) -> CellId:
        d, idx = cell
        return CellId(d - 1, self.faces[d][idx][i])

    def label(self, cell: CellId) -> str:
        if self.labels is not None:
            return self.labels[cell[0]][cell[1]]
        return str(cell[1]) if cell[0] == 0 else str(cell)

    def vertex_labels(self) -> tuple[str, ...]:
        return tuple(self.label(CellId(0, i)) for i in range(self.count(0)))

    @cached_property
    def cofaces(self) -> tuple[tuple[tuple[tuple[int, int], ...], ...], ...]:
        """``cofaces[k][i]``: (coface index, position) incidences of k-cell i."""
        out = [[[] for _ in level] for level in self.faces]
        for k in range(1, len(self.faces)):
            for j, f in enumerate(self.faces[k]):
                for pos, t in enumerate(f):
                    if 0 <= t < len(out[k - 1]):
                        out[k - 1][t].append((j, pos))
        return tuple(tuple(tuple(x) for x in level) for level in out)

    @cached_property
    def _vertex_table(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        table: list[tuple[tuple[int, ...], ...]] = []
        for k, level in enumerate(self.faces):
            if k == 0:
                table.append(tuple((i,) for i in range(len(level))))
                continue
            below = table[k - 1]
            rows = []
            for f in level:
                # drop vertex 0 -> (v1..vk); drop vertex k -> (v0..v_{k-1})
                tail = below[f[0]]
                head = below[f[k]]
                rows.append((head[0],) + tail)
            table.append(tuple(rows))
        return tuple(table)

    def vertices_of(self, cell: CellId) -> tuple[CellId, ...]:
        """Ordered vertices of ``cell``; vertex i is the face chain d1^(k-i) d0^i."""
        if not self.has_cell(cell):
            raise ComplexError(f"unknown cell {tuple(cell)}")
        return tuple(CellId(0, v) for v in self._vertex_table[cell[0]][cell[1]])

    def vertex_indices(self, cell: CellId) -> tuple[int, ...]:
        return self._vertex_table[cell[0]][cell[1]]

    @cached_property
    def closure(self) -> tuple[tuple[frozenset[CellId], ...], ...]:
        """Set of all iterated faces (including the cell itself) for every cell."""
        out: list[tuple[frozenset[CellId], ...]] = []
        for k, level in enumerate(self.faces):
            rows = []
            for i, f in enumerate(level):
                s = {CellId(k, i)}
                for t in f:
                    s |= out[k - 1][t]
                rows.append(frozenset(s))
            out.append(tuple(rows))
        return tuple(out)

    def relabel(self, labels: Sequence[Sequence[str]] | None) -> "DeltaComplex":
        return DeltaComplex(self.faces, None if labels is None else tuple(map(tuple, labels)))

    def __repr__(self) -> str:
        return f"DeltaComplex(cell_counts={self.cell_counts})"


EMPTY = DeltaComplex(())


# -- validation -----------------------------------------------------------


class Violation(NamedTuple):
    rule: str
    cells: tuple[CellId, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"rule": v.rule, "cells": [list(c) for c in v.cells], "message": v.message}
                for v in self.violations
            ],
        }


def validate(complex: DeltaComplex) -> ValidationReport:
    """Check face references, simplicial identities and regularity.

    Every violation is listed; nothing is raised.
    """
    violations: list[Violation] = []
    faces = complex.faces
    bad_ref: set[CellId] = set()
    for k in range(1, len(faces)):
        for i, f in enumerate(faces[k]):
            for pos, t in enumerate(f):
                if not 0 <= t < len(faces[k - 1]):
                    bad_ref.add(CellId(k, i))
                    violations.append(
                        Violation(
                            "face-reference",
                            (CellId(k, i),),
                            f"face {pos} of {CellId(k, i)} points to missing cell {CellId(k - 1, t)}",
                        )
                    )
    if bad_ref:
        # identities and vertex tables are meaningless past a dangling reference
        return ValidationReport(tuple(violations))

    for k in range(2, len(faces)):
        for idx, f in enumerate(faces[k]):
            for j in range(k + 1):
                for i in range(j):
                    lhs = faces[k - 1][f[j]][i]
                    rhs = faces[k - 1][f[i]][j - 1]
                    if lhs != rhs:
                        violations.append(
                            Violation(
                                "simplicial-identity",
                                (CellId(k, idx),),
                                f"d{i} d{j} != d{j - 1} d{i} on {CellId(k, idx)}",
                            )
                        )
    if any(v.rule == "simplicial-identity" for v in violations):
        return ValidationReport(tuple(violations))

    for k in range(1, len(faces)):
        for idx in range(len(faces[k])):
            verts = complex.vertex_indices(CellId(k, idx))
            if len(set(verts)) != len(verts):
                violations.append(
                    Violation(
                        "regularity",
                        (CellId(k, idx),),
                        f"{CellId(k, idx)} has repeated vertices {verts}",
                    )
                )
    return ValidationReport(tuple(violations))


# -- local structure ----------------------------------------------------------


def link(complex: DeltaComplex, vertex: CellId):
    """Link of a vertex in the order complex of the face poset.

    The result is a :class:`~dualcx.subdivision.SimplicialComplex` whose
    vertices are the cells strictly containing ``vertex`` and whose simplices
    are chains of such cells.
    """
    from .subdivision import SimplicialComplex

    vertex = CellId(*vertex)
    if vertex.dim != 0:
        raise ComplexError(f"link needs a vertex, got {tuple(vertex)}")
    if not complex.has_cell(vertex):
        raise ComplexError(f"unknown cell {tuple(vertex)}")
    star = [c for c in complex.cells() if c.dim > 0 and vertex in complex.closure[c.dim][c.index]]
    pos = {c: n for n, c in enumerate(star)}
    facets = []
    for c in star:
        # maximal chains ending at a cell with no coface in the star
        if any(True for _ in complex.cofaces[c.dim][c.index]):
            continue
        facets.extend(_chains_down(complex, c, vertex, pos))
    return SimplicialComplex.from_simplices(tuple(star), facets)


def _chains_down(complex: DeltaComplex, top: CellId, vertex: CellId, pos: dict) -> list[tuple[int, ...]]:
    out = []
    stack = [(top, (pos[top],))]
    while stack:
        cell, chain = stack.pop()
        below = [
            CellId(cell.dim - 1, t)
            for t in sorted(set(complex.faces[cell.dim][cell.index]))
            if cell.dim - 1 > 0 and vertex in complex.closure[cell.dim - 1][t]
        ]
        if not below:
            out.append(tuple(sorted(chain)))
        for b in below:
            stack.append((b, chain + (pos[b],)))
    return out


def _union_find_components(complex: DeltaComplex) -> list[list[CellId]]:
    parent = {c: c for c in complex.cells()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in range(1, len(complex.faces)):
        for i, f in enumerate(complex.faces[k]):
            a = find(CellId(k, i))
            for t in f:
                b = find(CellId(k - 1, t))
                if a != b:
                    lo, hi = min(a, b), max(a, b)
                    parent[hi] = lo
                    a = lo
    groups: dict[CellId, list[CellId]] = {}
    for c in complex.cells():
        groups.setdefault(find(c), []).append(c)
    return sorted(groups.values(), key=lambda g: min(g))


def subcomplex(complex: DeltaComplex, cells: Iterable[CellId]) -> tuple[DeltaComplex, dict[CellId, CellId]]:
    """Restrict to a face-closed set of cells, re-densifying indices.

    Returns the new complex and the old-to-new cell map.
    """
    keep = sorted(set(CellId(*c) for c in cells))
    new_index: dict[CellId, CellId] = {}
    counts: dict[int, int] = {}
    for c in keep:
        n = counts.get(c.dim, 0)
        new_index[c] = CellId(c.dim, n)
        counts[c.dim] = n + 1
    top = max((c.dim for c in keep), default=-1)
    faces: list[list[tuple[int, ...]]] = [[] for _ in range(top + 1)]
    labels: list[list[str]] | None = [[] for _ in range(top + 1)] if complex.labels is not None else None
    for c in keep:
        f = complex.faces[c.dim][c.index]
        try:
            faces[c.dim].append(tuple(new_index[CellId(c.dim - 1, t)].index for t in f))
        except KeyError as exc:
            raise ComplexError(f"cell set is not face-closed at {tuple(c)}") from exc
        if labels is not None:
            labels[c.dim].append(complex.labels[c.dim][c.index])
    return DeltaComplex(tuple(map(tuple, faces)), None if labels is None else tuple(map(tuple, labels))), new_index


def components(complex: DeltaComplex) -> list[DeltaComplex]:
    """Connected components, ordered by their lowest cell."""
    return [subcomplex(complex, group)[0] for group in _union_find_components(complex)]


def num_components(complex: DeltaComplex) -> int:
    return len(_union_find_components(complex))


class DimensionProfile(NamedTuple):
    dim: int
    equidimensional: bool


def dimension_profile(complex: DeltaComplex) -> list[DimensionProfile]:
    """Per-component (max dimension, equidimensional) records; [] when empty."""
    out = []
    for comp in components(complex):
        top = comp.dim
        covered: set[CellId] = set()
        for i in range(comp.count(top)):
            covered |= comp.closure[top][i]
        out.append(DimensionProfile(top, len(covered) == comp.num_cells))
    return out


def is_pure(complex: DeltaComplex) -> bool:
    top = complex.dim
    covered: set[CellId] = set()
    for i in range(complex.count(top)):
        covered |= complex.closure[top][i]
    return len(covered) == complex.num_cells


def face_poset_graph(complex: DeltaComplex):
    """Face poset as a networkx DiGraph (cell -> codimension-one face)."""
    import networkx as nx

    g = nx.DiGraph()
    for c in complex.cells():
        g.add_node(c, dim=c.dim)
    for k in range(1, len(complex.faces)):
        for i, f in enumerate(complex.faces[k]):
            for t in f:
                if g.has_edge(CellId(k, i), CellId(k - 1, t)):
                    g[CellId(k, i)][CellId(k - 1, t)]["mult"] += 1
                else:
                    g.add_edge(CellId(k, i), CellId(k - 1, t), mult=1)
    return g


def isomorphic(a: DeltaComplex, b: DeltaComplex) -> bool:
    """Face-poset isomorphism (dimension and incidence multiplicity preserving)."""
    if a.cell_counts != b.cell_counts:
        return False
    from networkx.algorithms.isomorphism import DiGraphMatcher

    gm = DiGraphMatcher(
        face_poset_graph(a),
        face_poset_graph(b),
        node_match=lambda x, y: x["dim"] == y["dim"],
        edge_match=lambda x, y: x["mult"] == y["mult"],
    )
    return gm.is_isomorphic()
