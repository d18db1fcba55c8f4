"""Dual complexes from stratification data, standard families, and joins."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .complex import EMPTY, CellId, ComplexError, DeltaComplex, validate
from .subdivision import SimplicialComplex


class StratificationError(ComplexError):
    """Bad stratification input; ``ids`` names the offending strata."""

    def __init__(self, message: str, ids: Sequence[str] = (), violations=()):
        super().__init__(message)
        self.ids = tuple(ids)
        self.violations = tuple(violations)


@dataclass(frozen=True)
class Stratum:
    id: str
    labels: tuple[str, ...]
    facets: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class StratificationData:
    """Divisor labels (their order is the global vertex order) and strata."""

    divisors: tuple[str, ...]
    strata: tuple[Stratum, ...]

    @classmethod
    def from_dict(cls, doc: Mapping) -> "StratificationData":
        strata = tuple(
            Stratum(str(s["id"]), tuple(str(x) for x in s["labels"]), {str(k): str(v) for k, v in s.get("facets", {}).items()})
            for s in doc["strata"]
        )
        return cls(tuple(str(d) for d in doc["divisors"]), strata)

    def as_dict(self) -> dict:
        return {
            "divisors": list(self.divisors),
            "strata": [
                {"id": s.id, "labels": list(s.labels), **({"facets": dict(sorted(s.facets.items()))} if s.facets else {})}
                for s in self.strata
            ],
        }


def _check_stratification(data: StratificationData) -> dict[str, int]:
    pos = {}
    for i, d in enumerate(data.divisors):
        if d in pos:
            raise StratificationError(f"duplicate divisor label {d!r}", [d])
        pos[d] = i
    seen: dict[str, Stratum] = {}
    for s in data.strata:
        if s.id in seen:
            raise StratificationError(f"duplicate stratum id {s.id!r}", [s.id])
        seen[s.id] = s
        if not s.labels:
            raise StratificationError(f"stratum {s.id!r} has no labels", [s.id])
        if len(set(s.labels)) != len(s.labels):
            raise StratificationError(f"stratum {s.id!r} repeats a label", [s.id])
        unknown = [x for x in s.labels if x not in pos]
        if unknown:
            raise StratificationError(f"stratum {s.id!r} uses unknown divisor {unknown[0]!r}", [s.id])
    singles: dict[str, list[str]] = {d: [] for d in data.divisors}
    for s in data.strata:
        if len(s.labels) == 1:
            singles[s.labels[0]].append(s.id)
    for d, ids in singles.items():
        if len(ids) != 1:
            raise StratificationError(
                f"divisor {d!r} needs exactly one one-label stratum, found {len(ids)}", ids or [d]
            )
    for s in data.strata:
        if len(s.labels) == 1:
            if s.facets:
                raise StratificationError(f"one-label stratum {s.id!r} must not list facets", [s.id])
            continue
        if set(s.facets) != set(s.labels):
            raise StratificationError(f"stratum {s.id!r} must name one facet per label", [s.id])
        for j, target in s.facets.items():
            if target not in seen:
                raise StratificationError(f"stratum {s.id!r} has dangling facet {target!r}", [s.id, target])
            want = set(s.labels) - {j}
            if set(seen[target].labels) != want:
                raise StratificationError(
                    f"facet {target!r} of {s.id!r} has labels {sorted(seen[target].labels)}, expected {sorted(want)}",
                    [s.id, target],
                )
    return pos


def from_stratification(data: StratificationData) -> DeltaComplex:
    """One (|J|-1)-cell per stratum; face i comes from the i-th smallest label."""
    pos = _check_stratification(data)
    key = lambda s: (tuple(sorted(pos[x] for x in s.labels)), s.id)
    by_dim: dict[int, list[Stratum]] = {}
    for s in data.strata:
        by_dim.setdefault(len(s.labels) - 1, []).append(s)
    top = max(by_dim, default=-1)
    for k in range(top + 1):
        if k not in by_dim:
            raise StratificationError(f"no strata with {k + 1} labels but higher strata exist")
    by_dim[0].sort(key=lambda s: pos[s.labels[0]])
    index: dict[str, int] = {}
    faces, labels = [], []
    for k in range(top + 1):
        level = by_dim[k] if k == 0 else sorted(by_dim[k], key=key)
        for i, s in enumerate(level):
            index[s.id] = i
        if k == 0:
            faces.append(tuple(() for _ in level))
        else:
            faces.append(
                tuple(
                    tuple(index[s.facets[j]] for j in sorted(s.labels, key=pos.__getitem__))
                    for s in level
                )
            )
        labels.append(tuple(s.id for s in level))
    cx = DeltaComplex(tuple(faces), tuple(labels))
    report = validate(cx)
    if not report.ok:
        bad = [labels[c.dim][c.index] for v in report.violations for c in v.cells]
        raise StratificationError(
            f"stratification violates Delta-complex rules: {report.violations[0].message}", bad, report.violations
        )
    return cx


def to_stratification(complex: DeltaComplex) -> StratificationData:
    """Export a regular complex; vertex labels become divisor labels."""
    if not validate(complex).ok:
        raise ComplexError("only valid regular complexes can be exported")
    vlabels = complex.vertex_labels()
    if len(set(vlabels)) != len(vlabels):
        vlabels = tuple(f"v{i}" for i in range(len(vlabels)))
    ids = {c: (vlabels[c.index] if c.dim == 0 else f"s{c.dim}_{c.index}") for c in complex.cells()}
    strata = []
    for c in complex.cells():
        verts = complex.vertex_indices(c)
        labels = tuple(vlabels[v] for v in verts)
        facets = {}
        if c.dim > 0:
            for i, v in enumerate(verts):
                facets[vlabels[v]] = ids[complex.face(c, i)]
        strata.append(Stratum(ids[c], labels, facets))
    return StratificationData(vlabels, tuple(strata))


def strata_cochain_dims(data: StratificationData) -> tuple[int, ...]:
    """Entry p counts strata lying on exactly p+1 divisors."""
    counts: dict[int, int] = {}
    for s in data.strata:
        counts[len(s.labels) - 1] = counts.get(len(s.labels) - 1, 0) + 1
    return tuple(counts.get(p, 0) for p in range(max(counts, default=-1) + 1))


# -- standard families ------------------------------------------------------


def from_simplices(vertex_labels: Sequence[str], simplices: Iterable[Iterable[int]]) -> DeltaComplex:
    """Delta-complex of a simplicial complex, vertices ordered as given."""
    sc = SimplicialComplex.from_simplices(tuple(vertex_labels), simplices)
    return sc.to_delta()


def empty() -> DeltaComplex:
    return EMPTY


def point(label: str = "0") -> DeltaComplex:
    return DeltaComplex((((),),), ((label,),))


def simplex(n: int) -> DeltaComplex:
    """The full n-simplex with all faces."""
    if n < 0:
        raise ValueError("simplex dimension must be >= 0")
    return from_simplices([str(i) for i in range(n + 1)], [tuple(range(n + 1))])


def simplex_boundary(m: int) -> DeltaComplex:
    """Boundary of the (m-1)-simplex on m vertices: a PL (m-2)-sphere."""
    if m < 2:
        raise ValueError("simplex_boundary needs m >= 2")
    return from_simplices([str(i) for i in range(m)], combinations(range(m), m - 1))


def crosspolytope_boundary(n: int) -> DeltaComplex:
    """Boundary of the n-dimensional cross-polytope.

    This is the strata complex of ``(P^1, {0}+{inf})^n``: vertices come in
    antipodal pairs ``i+``/``i-`` and a k-cell picks k+1 coordinates with one
    sign each.  It is PL-homeomorphic to the boundary of the n-cube but
    combinatorially its dual.
    """
    if n < 1:
        raise ValueError("crosspolytope_boundary needs n >= 1")
    labels = [f"{i}{s}" for i in range(1, n + 1) for s in "+-"]
    tops = [tuple(2 * i + s for i, s in enumerate(signs)) for signs in product((0, 1), repeat=n)]
    return from_simplices(labels, tops)


def cycle(n: int) -> DeltaComplex:
    if n < 3:
        raise ValueError("a simplicial cycle needs at least 3 vertices")
    return from_simplices([str(i) for i in range(n)], [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> DeltaComplex:
    """Path with n edges."""
    if n < 1:
        return point()
    return from_simplices([str(i) for i in range(n + 1)], [(i, i + 1) for i in range(n)])


def torus7() -> DeltaComplex:
    """Minimal 7-vertex triangulation of the torus."""
    tris = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    return from_simplices([str(i) for i in range(7)], tris)


def rp2_6() -> DeltaComplex:
    """Six-vertex triangulation of the real projective plane."""
    tris = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    return from_simplices([str(i) for i in range(6)], tris)


# -- combinations -------------------------------------------------------------


def _relabel_by_vertices(cx: DeltaComplex, vlabels: Sequence[str]) -> DeltaComplex:
    labels = []
    for k in range(cx.dim + 1):
        if k == 0:
            labels.append(tuple(vlabels))
        else:
            labels.append(tuple("|".join(vlabels[v] for v in cx.vertex_indices(CellId(k, i))) for i in range(cx.count(k))))
    return cx.relabel(labels)


def join(a: DeltaComplex, b: DeltaComplex) -> DeltaComplex:
    """Join a * b; vertices of ``a`` precede those of ``b`` in every cell."""
    # a cell is (p, i, q, j): a-cell of dim p (or -1 for the empty cell) with b-cell of dim q
    top = a.dim + b.dim + 1
    levels: list[list[tuple[int, int, int, int]]] = [[] for _ in range(top + 1)]
    a_cells = [(-1, 0)] + [tuple(c) for c in a.cells()]
    b_cells = [(-1, 0)] + [tuple(c) for c in b.cells()]
    for (p, i), (q, j) in product(a_cells, b_cells):
        if p < 0 and q < 0:
            continue
        levels[p + q + 1].append((p, i, q, j))
    for level in levels:
        level.sort(key=lambda t: (-t[0], t[1], t[3]))
    index = [{cell: n for n, cell in enumerate(level)} for level in levels]
    faces = []
    for k, level in enumerate(levels):
        if k == 0:
            faces.append(tuple(() for _ in level))
            continue
        rows = []
        for p, i, q, j in level:
            f = []
            for pos in range(k + 1):
                if pos <= p:
                    sub = (-1, 0, q, j) if p == 0 else (p - 1, a.faces[p][i][pos], q, j)
                else:
                    r = pos - p - 1
                    sub = (p, i, -1, 0) if q == 0 else (p, i, q - 1, b.faces[q][j][r])
                f.append(index[k - 1][sub])
            rows.append(tuple(f))
        faces.append(tuple(rows))
    cx = DeltaComplex(tuple(faces))
    return _relabel_by_vertices(cx, a.vertex_labels() + b.vertex_labels())


def cone(base: DeltaComplex, apex: str = "apex") -> DeltaComplex:
    """Join with a single new vertex, placed last in the vertex order."""
    return join(base, point(apex))


def disjoint_union(a: DeltaComplex, b: DeltaComplex) -> DeltaComplex:
    top = max(a.dim, b.dim)
    faces, labels = [], []
    for k in range(top + 1):
        shift = a.count(k - 1) if k else 0
        level = list(a.faces[k]) if k <= a.dim else []
        level += [tuple(t + shift for t in f) for f in (b.faces[k] if k <= b.dim else ())]
        faces.append(tuple(level))
        labels.append(tuple(a.label(c) for c in a.cells(k)) + tuple(b.label(c) for c in b.cells(k)))
    return DeltaComplex(tuple(faces), tuple(labels) if a.labels is not None or b.labels is not None else None)


def join_power(k: DeltaComplex, n: int) -> DeltaComplex:
    out = EMPTY
    for _ in range(n):
        out = join(out, k)
    return out


def sphere0() -> DeltaComplex:
    return DeltaComplex((((), ()),), (("+", "-"),))
