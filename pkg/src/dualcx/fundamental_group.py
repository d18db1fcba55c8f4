"""Edge-path presentations of pi_1, Tietze moves, and finiteness probes.

Words are tuples of nonzero ints: ``k`` is generator ``k-1`` and ``-k`` its
inverse.  Verdicts are sound by construction: a group is declared finite only
when coset enumeration over the trivial subgroup closes, and infinite only
when its abelianization has positive rank.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import kernels
from .complex import CellId, DeltaComplex, num_components
from .homology import HomologyGroup
from .subdivision import SimplicialComplex, barycentric

Word = tuple[int, ...]

DEFAULT_COSET_CAP = 1_000_000
MAX_INDEX_CAP = 10


class DisconnectedError(ValueError):
    pass


class CosetOverflow(RuntimeError):
    pass


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        if any(not g for g in self.generators):
            raise ValueError("generator names must be nonempty")
        n = len(self.generators)
        for r in self.relators:
            if any(x == 0 or abs(x) > n for x in r):
                raise ValueError(f"relator {r} uses an unknown generator")

    def word_str(self, w: Word) -> str:
        if not w:
            return "1"
        return "*".join(self.generators[abs(x) - 1] + ("^-1" if x < 0 else "") for x in w)

    def __str__(self) -> str:
        return "< " + ", ".join(self.generators) + " | " + ", ".join(self.word_str(r) for r in self.relators) + " >"

    def as_dict(self) -> dict:
        return {"generators": list(self.generators), "relators": [list(r) for r in self.relators]}

    @classmethod
    def from_dict(cls, doc: dict) -> "Presentation":
        return cls(tuple(doc["generators"]), tuple(tuple(r) for r in doc.get("relators", ())))


def presentation(complex, subdivide: bool = False) -> Presentation:
    """Edge-path presentation from a breadth-first spanning tree.

    Generators are the non-tree edges (named ``e<index>``); each 2-cell with
    faces (a0, a1, a2) contributes the loop a2 * a0 * a1^-1 with tree edges
    deleted.
    """
    if isinstance(complex, SimplicialComplex):
        complex = complex.to_delta()
    if subdivide:
        complex = barycentric(complex)[0].to_delta()
    if complex.is_empty or num_components(complex) != 1:
        raise DisconnectedError("fundamental group needs a connected, nonempty complex")
    nv = complex.count(0)
    edges = complex.faces[1] if complex.dim >= 1 else ()
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for e, (head, tail) in enumerate(edges):
        adj[tail].append((e, head))
        if head != tail:
            adj[head].append((e, tail))
    tree: set[int] = set()
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e, w in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    gen_of: dict[int, int] = {}
    names = []
    for e in range(len(edges)):
        if e not in tree:
            names.append(f"e{e}")
            gen_of[e] = len(names)
    rels = []
    for a0, a1, a2 in complex.faces[2] if complex.dim >= 2 else ():
        word = [gen_of.get(a2, 0), gen_of.get(a0, 0), -gen_of.get(a1, 0)]
        rels.append(tuple(x for x in word if x))
    return Presentation(tuple(names), tuple(rels))


# -- word utilities ----------------------------------------------------------


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Iterable[int]) -> Word:
    w = list(free_reduce(w))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i : j + 1])


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def _canonical(w: Word) -> Word:
    if not w:
        return w
    cands = []
    for v in (w, invert(w)):
        for i in range(len(v)):
            cands.append(v[i:] + v[:i])
    return min(cands)


def _total(rels) -> int:
    return sum(len(r) for r in rels)


def tietze_simplify(p: Presentation, budget: int = 10_000) -> Presentation:
    """Remove trivial and duplicate relators and eliminate generators.

    A generator occurring exactly once in some relator is solved for and
    substituted everywhere, shortest relators first, as long as the total
    relator length stays within a growth bound.  The generator count never
    increases; each step is a Tietze transformation.
    """
    gens = list(range(1, len(p.generators) + 1))
    rels = [cyclic_reduce(r) for r in p.relators]
    limit = max(4 * _total(rels), 200)
    steps = 0
    while steps < budget:
        steps += 1
        uniq: dict[Word, Word] = {}
        for r in rels:
            r = cyclic_reduce(r)
            if r:
                uniq.setdefault(_canonical(r), r)
        rels = sorted(uniq.values(), key=lambda r: (len(r), _canonical(r)))
        move = None
        for ri, r in enumerate(rels):
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for g in sorted(k for k, n in counts.items() if n == 1):
                i = next(n for n, x in enumerate(r) if abs(x) == g)
                rot = r[i:] + r[:i]
                rest = rot[1:]
                sub = invert(rest) if rot[0] > 0 else rest
                new_rels = []
                for rj, other in enumerate(rels):
                    if rj == ri:
                        continue
                    out: list[int] = []
                    for x in other:
                        if abs(x) == g:
                            out.extend(sub if x > 0 else invert(sub))
                        else:
                            out.append(x)
                    new_rels.append(cyclic_reduce(out))
                if _total(new_rels) <= limit:
                    move = (g, new_rels)
                    break
            if move:
                break
        if move is None:
            break
        g, rels = move
        gens.remove(g)
    renum = {g: n + 1 for n, g in enumerate(gens)}
    out_rels = []
    for r in rels:
        r = cyclic_reduce(r)
        if sum(1 for x in r if x < 0) * 2 > len(r):
            r = invert(r)
        if r:
            out_rels.append(tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in r))
    names = tuple(p.generators[g - 1] for g in gens)
    return Presentation(names, tuple(sorted(set(out_rels), key=lambda r: (len(r), r))))


def abelianization(p: Presentation) -> HomologyGroup:
    """Free rank and torsion of the relator exponent-sum matrix cokernel."""
    n = len(p.generators)
    rows = []
    for r in p.relators:
        row: dict[int, int] = {}
        for x in r:
            row[abs(x) - 1] = row.get(abs(x) - 1, 0) + (1 if x > 0 else -1)
        rows.append({k: v for k, v in row.items() if v})
    inv = kernels.smith_invariants(rows, n) if rows and n else []
    return HomologyGroup(n - len(inv), tuple(t for t in inv if t > 1))


# -- coset enumeration --------------------------------------------------------


def _cols(w: Word) -> list[int]:
    return [2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in w]


def todd_coxeter(p: Presentation, subgroup: Sequence[Word] = (), cap: int = DEFAULT_COSET_CAP) -> int:
    """Index of the subgroup (default trivial) by HLT coset enumeration.

    Raises :class:`CosetOverflow` once more than ``cap`` cosets are defined.
    """
    ncols = 2 * len(p.generators)
    if ncols == 0:
        return 1
    rels = [_cols(cyclic_reduce(r)) for r in p.relators if cyclic_reduce(r)]
    table: list[list[int]] = [[-1] * ncols]
    parent = [0]
    queue: list[int] = []

    def rep(c: int) -> int:
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def merge(a: int, b: int) -> None:
        a, b = rep(a), rep(b)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            parent[hi] = lo
            queue.append(hi)

    def coincidence(a: int, b: int) -> None:
        queue.clear()
        merge(a, b)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            row = table[g]
            for x in range(ncols):
                d = row[x]
                if d < 0:
                    continue
                table[d][x ^ 1] = -1
                mu, nu = rep(g), rep(d)
                if table[mu][x] >= 0:
                    merge(nu, table[mu][x])
                elif table[nu][x ^ 1] >= 0:
                    merge(mu, table[nu][x ^ 1])
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def define(c: int, x: int) -> None:
        if len(table) >= cap:
            raise CosetOverflow(f"coset table exceeded {cap} rows")
        d = len(table)
        table.append([-1] * ncols)
        parent.append(d)
        table[c][x] = d
        table[d][x ^ 1] = c

    def scan_and_fill(c: int, w: list[int]) -> None:
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            define(f, w[i])

    for h in subgroup:
        h = _cols(free_reduce(h))
        if h:
            scan_and_fill(0, h)
    a = 0
    while a < len(table):
        if parent[a] == a:
            for w in rels:
                if parent[a] != a:
                    break
                scan_and_fill(a, w)
            if parent[a] == a:
                for x in range(ncols):
                    if table[a][x] < 0:
                        define(a, x)
        a += 1
    return sum(1 for c in range(len(table)) if parent[c] == c)


def low_index_subgroups(p: Presentation, max_index: int) -> dict[int, int]:
    """Number of subgroups of each index up to ``max_index``.

    Standardised coset tables are enumerated by backtracking: the first
    undefined entry is tried against every existing coset whose inverse slot
    is free, then against one new coset; relators are scanned for forced
    deductions and contradictions after each choice.
    """
    counts = {k: 0 for k in range(1, max_index + 1)}
    ncols = 2 * len(p.generators)
    if ncols == 0:
        counts[1] = 1
        return counts
    rels = [_cols(cyclic_reduce(r)) for r in p.relators if cyclic_reduce(r)]

    def propagate(table, n) -> bool:
        changed = True
        while changed:
            changed = False
            for c in range(n):
                for w in rels:
                    f, i = c, 0
                    while i < len(w) and table[f][w[i]] >= 0:
                        f = table[f][w[i]]
                        i += 1
                    if i == len(w):
                        if f != c:
                            return False
                        continue
                    b, j = c, len(w) - 1
                    while j >= i and table[b][w[j] ^ 1] >= 0:
                        b = table[b][w[j] ^ 1]
                        j -= 1
                    if j < i:
                        if f != b:
                            return False
                    elif i == j:
                        x = w[i]
                        if table[f][x] >= 0 or table[b][x ^ 1] >= 0:
                            return False
                        table[f][x] = b
                        table[b][x ^ 1] = f
                        changed = True
        return True

    def search(table, n) -> None:
        if not propagate(table, n):
            return
        first = next(((c, x) for c in range(n) for x in range(ncols) if table[c][x] < 0), None)
        if first is None:
            counts[n] += 1
            return
        c, x = first
        for d in range(n):
            if table[d][x ^ 1] < 0:
                t = [row[:] for row in table]
                t[c][x] = d
                t[d][x ^ 1] = c
                search(t, n)
        if n < max_index:
            t = [row[:] for row in table]
            t[c][x] = n
            t[n][x ^ 1] = c
            search(t, n + 1)

    search([[-1] * ncols for _ in range(max_index)], 1)
    return counts


@dataclass(frozen=True)
class FinitenessProbe:
    max_index: int
    subgroup_counts: dict[int, int]
    abelianization: HomologyGroup
    verdict: str  # ProvablyFinite | ProvablyInfinite | Unknown
    order: int | None = None
    witness: str = ""
    simplified: Presentation | None = field(default=None, compare=False)

    def as_dict(self) -> dict:
        return {
            "max_index": self.max_index,
            "subgroup_counts": {str(k): v for k, v in sorted(self.subgroup_counts.items())},
            "abelianization": {"rank": self.abelianization.rank, "torsion": list(self.abelianization.torsion)},
            "verdict": self.verdict,
            "order": self.order,
            "witness": self.witness,
        }


def low_index_probe(p: Presentation, max_index: int = 5, cap: int = DEFAULT_COSET_CAP, max_index_cap: int = MAX_INDEX_CAP) -> FinitenessProbe:
    """Probe finite quotients of the group and try to prove it finite or infinite."""
    if not 1 <= max_index <= max_index_cap:
        raise ValueError(f"max_index must lie in 1..{max_index_cap}")
    q = tietze_simplify(p)
    ab = abelianization(q)
    counts = low_index_subgroups(q, max_index)
    if ab.rank > 0:
        return FinitenessProbe(max_index, counts, ab, "ProvablyInfinite", None, f"abelianization has free rank {ab.rank}", q)
    try:
        order = todd_coxeter(q, (), cap)
    except CosetOverflow as exc:
        return FinitenessProbe(max_index, counts, ab, "Unknown", None, str(exc), q)
    return FinitenessProbe(max_index, counts, ab, "ProvablyFinite", order, "coset enumeration closed", q)


def pi1_probe(complex: DeltaComplex, max_index: int = 5, cap: int = DEFAULT_COSET_CAP) -> FinitenessProbe:
    return low_index_probe(presentation(complex), max_index, cap)
