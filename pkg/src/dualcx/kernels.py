"""Integer elimination kernels with backend selection.

The compiled module ``dualcx._ckernels`` is used when it was built and the
matrix fits the dense int64 path; otherwise (or after an int64 overflow) the
exact pure-Python sparse kernels run.  Set ``DUALCX_PURE_PYTHON=1`` to force
the fallback.
"""

from __future__ import annotations

import logging
import os
from math import gcd
from typing import Sequence

from . import _pykernels

logger = logging.getLogger(__name__)

try:  # pragma: no cover - depends on the build
    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

DENSE_LIMIT = 25_000_000


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ckernels is not None else [])


def default_backend() -> str:
    if _ckernels is None or os.environ.get("DUALCX_PURE_PYTHON"):
        return "python"
    return "cython"


BACKEND = default_backend()


def _dense(rows: Sequence[dict[int, int]], ncols: int):
    import numpy as np

    a = np.zeros((len(rows), ncols), dtype=np.int64)
    for r, row in enumerate(rows):
        for c, v in row.items():
            a[r, c] = v
    return a


def _run(name: str, rows: Sequence[dict[int, int]], ncols: int, backend: str | None):
    backend = backend or default_backend()
    if not rows or ncols == 0:
        return [] if name == "smith_diagonal" else 0
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not built")
        if len(rows) * ncols <= DENSE_LIMIT:
            if max((abs(v) for row in rows for v in row.values()), default=0) < 2**31:
                try:
                    return getattr(_ckernels, name)(_dense(rows, ncols))
                except OverflowError:
                    logger.debug("%s: int64 overflow, rerunning with big integers", name)
    elif backend != "python":
        raise ValueError(f"unknown backend {backend!r}")
    return getattr(_pykernels, name)([dict(r) for r in rows])


def smith_diagonal(rows: Sequence[dict[int, int]], ncols: int, backend: str | None = None) -> list[int]:
    return _run("smith_diagonal", rows, ncols, backend)


def rank(rows: Sequence[dict[int, int]], ncols: int, backend: str | None = None) -> int:
    """Exact rank over the rationals."""
    return _run("rank", rows, ncols, backend)


def invariant_factors(diagonal: Sequence[int]) -> list[int]:
    """Normalise a diagonal so each entry divides the next (gcd/lcm sweeps)."""
    d = sorted(abs(x) for x in diagonal if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            if b % a:
                g = gcd(a, b)
                d[i], d[j] = g, a // g * b
    return d


def smith_invariants(rows: Sequence[dict[int, int]], ncols: int, backend: str | None = None) -> list[int]:
    """Nonzero invariant factors of the matrix, ascending with divisibility."""
    return invariant_factors(smith_diagonal(rows, ncols, backend))
