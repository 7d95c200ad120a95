"""Pure-Python fraction-free elimination kernel.

Same contract as the compiled kernel in ``_kernel.pyx``; used as the
fallback when the extension is unavailable or disabled.
"""


def bareiss_echelon(rows, ncols):
    """Fraction-free (Bareiss) row reduction of an integer matrix.

    ``rows`` is a sequence of equal-length integer rows; the input is not
    mutated.  Returns ``(rank, pivot_cols, echelon)`` where ``echelon`` holds
    the first ``rank`` rows of an integer row-echelon form with the same row
    space as the input.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    rank = 0
    prev = 1
    pivots = []
    for col in range(ncols):
        pr = -1
        for r in range(rank, nrows):
            if m[r][col]:
                pr = r
                break
        if pr < 0:
            continue
        if pr != rank:
            m[rank], m[pr] = m[pr], m[rank]
        top = m[rank]
        piv = top[col]
        for r in range(rank + 1, nrows):
            mr = m[r]
            f = mr[col]
            if f:
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
