# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense int64 elimination kernels.

Same pivot rule as :mod:`dualcx._pykernels` (smallest magnitude, lowest row,
lowest column).  Entries are machine integers; any step that could leave the
int64 range raises ``OverflowError`` so the caller can rerun the exact
big-integer path.
"""

from libc.stdlib cimport malloc, free

ctypedef long long i64

cdef i64 LIMIT = 2147483647  # |q|, |x| <= 2^31 keeps q*x and the sum in range


cdef inline i64 iabs(i64 x) nogil:
    return -x if x < 0 else x


cdef inline i64 floordiv(i64 a, i64 b) nogil:
    cdef i64 q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline i64 igcd(i64 a, i64 b) nogil:
    a = iabs(a)
    b = iabs(b)
    while b:
        a, b = b, a % b
    return a


cdef int select_pivot(i64[:, ::1] a, char* row_alive, Py_ssize_t* pr, Py_ssize_t* pc):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], r, c
    cdef i64 best = 0, x, rowmin
    cdef Py_ssize_t rowcol
    cdef int found = 0
    for r in range(m):
        if not row_alive[r]:
            continue
        rowmin = 0
        rowcol = -1
        for c in range(n):
            x = iabs(a[r, c])
            if x != 0 and (rowmin == 0 or x < rowmin):
                rowmin = x
                rowcol = c
                if x == 1:
                    break
        if rowmin == 0:
            row_alive[r] = 0
            continue
        if not found or rowmin < best:
            best = rowmin
            pr[0] = r
            pc[0] = rowcol
            found = 1
            if best == 1:
                break
    return found


def smith_diagonal(i64[:, ::1] a):
    """Nonzero diagonal after unimodular elimination; ``a`` is overwritten."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r = 0, c = 0, r2, j, k, nnz
    cdef i64 v, q, x, y
    cdef bint dirty
    cdef char* row_alive = <char*> malloc(m + 1)
    cdef Py_ssize_t* nzcols = <Py_ssize_t*> malloc((n + 1) * sizeof(Py_ssize_t))
    out = []
    try:
        for r2 in range(m):
            row_alive[r2] = 1
        while select_pivot(a, row_alive, &r, &c):
            v = a[r, c]
            nnz = 0
            for j in range(n):
                if a[r, j] != 0:
                    nzcols[nnz] = j
                    nnz += 1
            dirty = False
            for r2 in range(m):
                if r2 == r or not row_alive[r2] or a[r2, c] == 0:
                    continue
                q = floordiv(a[r2, c], v)
                if iabs(q) > LIMIT:
                    raise OverflowError("multiplier out of int64-safe range")
                for k in range(nnz):
                    j = nzcols[k]
                    x = a[r, j]
                    if iabs(x) > LIMIT:
                        raise OverflowError("entry out of int64-safe range")
                    y = a[r2, j] - q * x
                    if iabs(y) > (<i64> 1 << 62):
                        raise OverflowError("entry out of int64-safe range")
                    a[r2, j] = y
                if a[r2, c] != 0:
                    dirty = True
            if dirty:
                continue
            for k in range(nnz):
                j = nzcols[k]
                if j == c:
                    continue
                x = a[r, j] - floordiv(a[r, j], v) * v
                a[r, j] = x
                if x != 0:
                    dirty = True
            if dirty:
                continue
            out.append(int(iabs(v)))
            row_alive[r] = 0
            a[r, c] = 0
    finally:
        free(row_alive)
        free(nzcols)
    return out


def rank(i64[:, ::1] a):
    """Rank over Q by fraction-free elimination; ``a`` is overwritten."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r = 0, c = 0, r2, j, k, nnz
    cdef i64 v, g, s, t, x, y, content
    cdef Py_ssize_t rk = 0
    cdef char* row_alive = <char*> malloc(m + 1)
    cdef Py_ssize_t* nzcols = <Py_ssize_t*> malloc((n + 1) * sizeof(Py_ssize_t))
    try:
        for r2 in range(m):
            row_alive[r2] = 1
        while select_pivot(a, row_alive, &r, &c):
            v = a[r, c]
            row_alive[r] = 0
            rk += 1
            nnz = 0
            for j in range(n):
                if a[r, j] != 0:
                    nzcols[nnz] = j
                    nnz += 1
            for r2 in range(m):
                if not row_alive[r2] or a[r2, c] == 0:
                    continue
                g = igcd(v, a[r2, c])
                s = v / g
                t = a[r2, c] / g
                if iabs(s) > LIMIT or iabs(t) > LIMIT:
                    raise OverflowError("multiplier out of int64-safe range")
                content = 0
                for j in range(n):
                    x = a[r2, j]
                    if x != 0 and s != 1:
                        if iabs(x) > LIMIT:
                            raise OverflowError("entry out of int64-safe range")
                        a[r2, j] = x * s
                for k in range(nnz):
                    j = nzcols[k]
                    x = a[r, j]
                    if iabs(x) > LIMIT:
                        raise OverflowError("entry out of int64-safe range")
                    y = a[r2, j] - t * x
                    if iabs(y) > (<i64> 1 << 62):
                        raise OverflowError("entry out of int64-safe range")
                    a[r2, j] = y
                for j in range(n):
                    if a[r2, j] != 0:
                        content = igcd(content, a[r2, j])
                        if content == 1:
                            break
                if content > 1:
                    for j in range(n):
                        a[r2, j] = a[r2, j] / content
    finally:
        free(row_alive)
        free(nzcols)
    return rk
