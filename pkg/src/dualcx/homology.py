"""Exact cellular (co)homology of Delta-complexes over Q and Z."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Sequence

from . import kernels
from .complex import CellId, DeltaComplex


@dataclass(frozen=True)
class IntMatrix:
    """Sparse integer matrix as sorted (row, col, value) triples."""

    shape: tuple[int, int]
    entries: tuple[tuple[int, int, int], ...]

    def rows(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [{} for _ in range(self.shape[0])]
        for r, c, v in self.entries:
            out[r][c] = v
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix((self.shape[1], self.shape[0]), tuple(sorted((c, r, v) for r, c, v in self.entries)))

    def to_numpy(self):
        import numpy as np

        a = np.zeros(self.shape, dtype=object)
        for r, c, v in self.entries:
            a[r, c] = v
        return a

    def to_lists(self) -> list[list[int]]:
        a = [[0] * self.shape[1] for _ in range(self.shape[0])]
        for r, c, v in self.entries:
            a[r][c] = v
        return a

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        right = other.rows()
        acc: dict[tuple[int, int], int] = {}
        for r, k, v in self.entries:
            for c, w in right[k].items():
                acc[r, c] = acc.get((r, c), 0) + v * w
        return IntMatrix((self.shape[0], other.shape[1]), tuple(sorted((r, c, v) for (r, c), v in acc.items() if v)))

    def is_zero(self) -> bool:
        return not self.entries

    def rank(self, backend: str | None = None) -> int:
        return kernels.rank(self.rows(), self.shape[1], backend)

    def smith_invariants(self, backend: str | None = None) -> list[int]:
        return kernels.smith_invariants(self.rows(), self.shape[1], backend)


@dataclass(frozen=True)
class ChainComplex:
    """``boundaries[k-1]`` is the matrix of d_k : C_k -> C_{k-1} (rows C_{k-1})."""

    cell_counts: tuple[int, ...]
    boundaries: tuple[IntMatrix, ...]

    def d(self, k: int) -> IntMatrix | None:
        if 1 <= k <= len(self.boundaries):
            return self.boundaries[k - 1]
        return None

    def is_complex(self) -> bool:
        return all((self.boundaries[k - 1] @ self.boundaries[k]).is_zero() for k in range(1, len(self.boundaries)))


class ChainComplexError(ArithmeticError):
    pass


@lru_cache(maxsize=256)
def chain_complex(complex: DeltaComplex) -> ChainComplex:
    """Cellular chain complex with d(sigma) = sum (-1)^i face_i(sigma).

    Matrices exist for degrees 1..max(dim, 1); d o d = 0 is verified.
    """
    counts = complex.cell_counts
    mats = []
    for k in range(1, max(complex.dim, 1) + 1):
        acc: dict[tuple[int, int], int] = {}
        for j, f in enumerate(complex.faces[k] if k <= complex.dim else ()):
            for i, t in enumerate(f):
                acc[t, j] = acc.get((t, j), 0) + (-1 if i % 2 else 1)
        entries = tuple(sorted((r, c, v) for (r, c), v in acc.items() if v))
        mats.append(IntMatrix((complex.count(k - 1), complex.count(k)), entries))
    cc = ChainComplex(counts, tuple(mats))
    if not cc.is_complex():
        raise ChainComplexError("boundary of boundary is not zero")
    return cc


class HomologyGroup(NamedTuple):
    rank: int
    torsion: tuple[int, ...]

    def __str__(self) -> str:
        parts = (["Z"] if self.rank == 1 else [f"Z^{self.rank}"] if self.rank else []) + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class HomologyResult:
    """Betti numbers and torsion coefficients for degrees 0..dim."""

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for ts in self.torsion:
            if any(t < 2 for t in ts):
                raise ValueError("torsion coefficients must be >= 2")
            if any(b % a for a, b in zip(ts, ts[1:])):
                raise ValueError("torsion coefficients must form a divisibility chain")

    def __getitem__(self, k: int) -> HomologyGroup:
        if 0 <= k < len(self.betti):
            return HomologyGroup(self.betti[k], self.torsion[k])
        return HomologyGroup(0, ())

    def __len__(self) -> int:
        return len(self.betti)

    def __iter__(self):
        return (self[k] for k in range(len(self.betti)))

    @property
    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    def as_dict(self) -> dict:
        return {
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
            "groups": [str(self[k]) for k in range(len(self.betti))],
        }

    def __str__(self) -> str:
        return ", ".join(f"H{k}={self[k]}" for k in range(len(self.betti)))


@lru_cache(maxsize=256)
def _ranks_q(complex: DeltaComplex, backend: str | None) -> tuple[int, ...]:
    cc = chain_complex(complex)
    return tuple(m.rank(backend) for m in cc.boundaries)


@lru_cache(maxsize=256)
def _smith(complex: DeltaComplex, backend: str | None) -> tuple[tuple[int, ...], ...]:
    cc = chain_complex(complex)
    return tuple(tuple(m.smith_invariants(backend)) for m in cc.boundaries)


def _rank_at(ranks: Sequence[int], k: int) -> int:
    return ranks[k - 1] if 1 <= k <= len(ranks) else 0


def betti(complex: DeltaComplex, reduced: bool = False, backend: str | None = None) -> tuple[int, ...]:
    """Rational Betti numbers b_0..b_dim from exact ranks over Q."""
    ranks = _ranks_q(complex, backend)
    out = [complex.count(k) - _rank_at(ranks, k) - _rank_at(ranks, k + 1) for k in range(complex.dim + 1)]
    if reduced and out:
        out[0] -= 1
    return tuple(out)


def integral_homology(complex: DeltaComplex, reduced: bool = False, backend: str | None = None) -> HomologyResult:
    """H_k(K; Z) from Smith normal forms of the boundary matrices."""
    snf = _smith(complex, backend)
    ranks = [len(s) for s in snf]
    free, tors = [], []
    for k in range(complex.dim + 1):
        free.append(complex.count(k) - _rank_at(ranks, k) - _rank_at(ranks, k + 1))
        above = snf[k] if k < len(snf) else ()
        tors.append(tuple(t for t in above if t > 1))
    if reduced and free:
        free[0] -= 1
    return HomologyResult(tuple(free), tuple(tors))


def integral_cohomology(complex: DeltaComplex, backend: str | None = None) -> HomologyResult:
    """H^k(K; Z) from the transposed boundary matrices."""
    cc = chain_complex(complex)
    cob = [m.transpose() for m in cc.boundaries]  # delta_{k-1}: C^{k-1} -> C^k
    snf = [m.smith_invariants(backend) for m in cob]
    ranks = [len(s) for s in snf]
    free, tors = [], []
    for k in range(complex.dim + 1):
        free.append(complex.count(k) - _rank_at(ranks, k) - _rank_at(ranks, k + 1))
        into = snf[k - 1] if 1 <= k <= len(snf) else ()
        tors.append(tuple(t for t in into if t > 1))
    return HomologyResult(tuple(free), tuple(tors))


def euler_characteristic(complex: DeltaComplex) -> int:
    return sum((-1) ** k * n for k, n in enumerate(complex.cell_counts))


class SphereCertificate(NamedTuple):
    ok: bool
    betti: tuple[int, ...]
    expected: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {"ok": self.ok, "betti": list(self.betti), "expected": list(self.expected)}


def sphere_betti(n: int) -> tuple[int, ...]:
    if n == 0:
        return (2,)
    return (1,) + (0,) * (n - 1) + (1,)


def is_rational_homology_sphere(complex: DeltaComplex, n: int) -> SphereCertificate:
    b = betti(complex)
    want = sphere_betti(n)
    return SphereCertificate(b == want, b, want)


# -- explicit cycle bases and induced maps -----------------------------------

Vector = dict  # cell index -> Fraction


class _Echelon:
    """Incremental echelon basis; each row remembers its homology coordinates."""

    def __init__(self):
        self.rows: dict[int, tuple[Vector, Vector]] = {}

    def reduce(self, v: Vector) -> tuple[Vector, Vector]:
        v = {k: x for k, x in v.items() if x}
        coords: Vector = {}
        while v:
            p = min(v)
            if p not in self.rows:
                break
            row, rc = self.rows[p]
            c = v[p]
            for k, x in row.items():
                nv = v.get(k, 0) - c * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
            for k, x in rc.items():
                coords[k] = coords.get(k, 0) + c * x
        return v, coords

    def insert(self, v: Vector, tag: Vector) -> bool:
        rem, coords = self.reduce(v)
        if not rem:
            return False
        p = min(rem)
        lead = rem[p]
        hc = dict(tag)
        for k, x in coords.items():
            hc[k] = hc.get(k, 0) - x
        self.rows[p] = ({k: x / lead for k, x in rem.items()}, {k: x / lead for k, x in hc.items() if x})
        return True


def _nullspace(m: IntMatrix) -> list[Vector]:
    """Kernel basis of m by RREF over Q; one vector per free column, in order."""
    nrows, ncols = m.shape
    cols = [dict() for _ in range(ncols)]
    for r, c, v in m.entries:
        cols[c][r] = Fraction(v)
    # row-reduce on the transpose view: process columns left to right
    pivots: dict[int, int] = {}  # row -> column holding its pivot
    reduced: dict[int, dict[int, Fraction]] = {}
    basis = []
    for c in range(ncols):
        v = dict(cols[c])
        # express column c in terms of previous pivot columns
        combo: dict[int, Fraction] = {}
        while v:
            r = min(v)
            if r not in pivots:
                break
            pc = pivots[r]
            a = v[r]
            prow, pcombo = reduced[pc]
            for k, x in prow.items():
                nv = v.get(k, 0) - a * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
            for k, x in pcombo.items():
                combo[k] = combo.get(k, 0) + a * x
        if v:
            r = min(v)
            lead = v[r]
            own = {c: Fraction(1)}
            for k, x in combo.items():
                own[k] = own.get(k, 0) - x
            pivots[r] = c
            reduced[c] = ({k: x / lead for k, x in v.items()}, {k: x / lead for k, x in own.items() if x})
        else:
            # column c = sum combo[k] * column k  ->  e_c - combo is in the kernel
            vec = {c: Fraction(1)}
            for k, x in combo.items():
                vec[k] = vec.get(k, 0) - x
            basis.append({k: x for k, x in vec.items() if x})
    return basis


@dataclass(frozen=True)
class HomologyBasis:
    """Rational homology representatives in one degree, with their echelon."""

    degree: int
    representatives: tuple[Vector, ...]
    echelon: _Echelon

    def coordinates(self, cycle: Vector) -> list[Fraction]:
        rem, coords = self.echelon.reduce(cycle)
        if rem:
            raise ChainComplexError("vector is not a cycle")
        return [coords.get(j, Fraction(0)) for j in range(len(self.representatives))]


def homology_basis(complex: DeltaComplex, k: int) -> HomologyBasis:
    """Cycle representatives for H_k(K; Q), by column reduction in cell order.

    Boundaries (columns of d_{k+1}) are inserted first, then kernel vectors of
    d_k; kernel vectors that stay independent become the representatives.
    """
    cc = chain_complex(complex)
    n = complex.count(k)
    dk = cc.d(k)
    if dk is None:
        zbasis = [{i: Fraction(1)} for i in range(n)]
    else:
        zbasis = _nullspace(dk)
    ech = _Echelon()
    up = cc.d(k + 1)
    if up is not None:
        cols: list[Vector] = [dict() for _ in range(up.shape[1])]
        for r, c, v in up.entries:
            cols[c][r] = Fraction(v)
        for col in cols:
            ech.insert(col, {})
    reps = []
    for z in zbasis:
        if ech.insert(z, {len(reps): Fraction(1)}):
            reps.append(z)
    return HomologyBasis(k, tuple(reps), ech)


def induced_trace(basis: HomologyBasis, chain_map: Callable[[int], tuple[int, int]]) -> Fraction:
    """Trace of a chain map on H_k(K; Q).

    ``chain_map(i)`` returns ``(sign, j)``: the k-cell i goes to sign * cell j.
    """
    total = Fraction(0)
    for j, z in enumerate(basis.representatives):
        image: Vector = {}
        for i, x in z.items():
            s, t = chain_map(i)
            image[t] = image.get(t, 0) + s * x
        total += basis.coordinates(image)[j]
    return total


def chain_vector(cells: Iterable[tuple[CellId, int]]) -> Vector:
    out: Vector = {}
    for c, v in cells:
        out[c.index] = out.get(c.index, 0) + v
    return out
