# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fraction-free elimination kernel.

Arithmetic stays on Python integers (arbitrary precision is required);
Cython removes the interpreter overhead of the inner loops.
"""


def bareiss_echelon(rows, Py_ssize_t ncols):
    """Fraction-free (Bareiss) row reduction of an integer matrix.

    Returns ``(rank, pivot_cols, echelon)``; see the pure-Python twin for the
    full contract.
    """
    cdef list m = [list(row) for row in rows]
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t col, r, c, pr
    cdef list top, mr, pivots
    prev = 1
    pivots = []
    for col in range(ncols):
        pr = -1
        for r in range(rank, nrows):
            if m[r][col] != 0:
                pr = r
                break
        if pr < 0:
            continue
        if pr != rank:
            m[rank], m[pr] = m[pr], m[rank]
        top = <list> m[rank]
        piv = top[col]
        for r in range(rank + 1, nrows):
            mr = <list> m[r]
            f = mr[col]
            if f != 0:
                for c in range(col, ncols):
                    mr[c] = (piv * mr[c] - f * top[c]) // prev
            elif prev != 1 or piv != 1:
                for c in range(col, ncols):
                    mr[c] = (piv * mr[c]) // prev
        prev = piv
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return rank, pivots, m[:rank]
