"""Pure-Python integer elimination kernels (sparse rows, exact big ints).

Both kernels take a matrix as a list of sparse rows ``{col: value}`` and
consume it.  Pivot rule shared with the compiled kernels: smallest nonzero
magnitude, ties broken by lowest row, then lowest column.
"""

from __future__ import annotations

from collections import deque
from math import gcd


def _select_pivot(rows: dict[int, dict[int, int]], order: deque) -> tuple[int, int]:
    # order holds row ids ascending; dead ids are trimmed from the front lazily
    while order and order[0] not in rows:
        order.popleft()
    best = None
    for r in order:
        row = rows.get(r)
        if row is None:
            continue
        m = min(abs(v) for v in row.values())
        if best is None or m < best[0]:
            c = min(c for c, v in row.items() if abs(v) == m)
            best = (m, r, c)
            if m == 1:
                break
    return best[1], best[2]


def _build(rows_in: list[dict[int, int]]):
    rows = {r: dict(row) for r, row in enumerate(rows_in) if any(row.values())}
    for row in rows.values():
        for c in [c for c, v in row.items() if v == 0]:
            del row[c]
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    return rows, cols


def _axpy(rows, cols, target: int, q: int, source: dict[int, int]) -> None:
    """rows[target] -= q * source, maintaining the column index."""
    row = rows[target]
    for c, v in source.items():
        nv = row.get(c, 0) - q * v
        if nv:
            if c not in row:
                cols.setdefault(c, set()).add(target)
            row[c] = nv
        elif c in row:
            del row[c]
            cols[c].discard(target)


def smith_diagonal(rows_in: list[dict[int, int]]) -> list[int]:
    """Nonzero diagonal of a diagonalisation by unimodular row/column ops.

    The entries still need gcd/lcm normalisation to become invariant factors.
    """
    rows, cols = _build(rows_in)
    order = deque(sorted(rows))
    diag: list[int] = []
    while rows:
        r, c = _select_pivot(rows, order)
        prow = rows[r]
        v = prow[c]
        dirty = False
        for r2 in sorted(cols.get(c, ()) - {r}):
            q = rows[r2][c] // v
            _axpy(rows, cols, r2, q, prow)
            if c in rows[r2]:
                dirty = True
            if not rows[r2]:
                del rows[r2]
        if dirty:
            continue
        # column c is clear below/above the pivot; column ops touch row r only
        for c2 in sorted(k for k in prow if k != c):
            nv = prow[c2] - (prow[c2] // v) * v
            if nv:
                prow[c2] = nv
                dirty = True
            else:
                del prow[c2]
                cols[c2].discard(r)
        if dirty:
            continue
        diag.append(abs(v))
        del rows[r]
        cols[c].discard(r)
    return diag


def rank(rows_in: list[dict[int, int]]) -> int:
    """Rank over Q by fraction-free elimination with row content removal."""
    rows, cols = _build(rows_in)
    order = deque(sorted(rows))
    rk = 0
    while rows:
        r, c = _select_pivot(rows, order)
        prow = rows.pop(r)
        for c2 in prow:
            cols[c2].discard(r)
        v = prow[c]
        for r2 in sorted(cols.get(c, ())):
            row = rows[r2]
            a = row[c]
            g = gcd(v, a)
            s, t = v // g, a // g
            if s != 1:
                for k in row:
                    row[k] *= s
            _axpy(rows, cols, r2, t, prow)
            if not row:
                del rows[r2]
                continue
            content = 0
            for x in row.values():
                content = gcd(content, x)
                if content == 1:
                    break
            if content > 1:
                for k in row:
                    row[k] //= content
        rk += 1
    return rk
