"""Pure-Python row reduction over a prime field.

Same interface as the compiled ``_fastrank`` extension; selected as a
fallback when the extension is unavailable (or when MONAD_FORGE_PURE is
set).  All arithmetic is on Python ints, so any prime below 2**63 works.
"""

from __future__ import annotations

BACKEND = "pure"


def _as_rows(mat):
    if hasattr(mat, "tolist"):
        return [list(map(int, row)) for row in mat.tolist()]
    return [list(map(int, row)) for row in mat]


def _rank_rows(rows, p):
    # In-place Gaussian elimination; rows entries already reduced mod p.
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    for col in range(ncols):
        pivot = -1
        for i in range(rank, nrows):
            if rows[i][col]:
                pivot = i
                break
        if pivot < 0:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        inv = pow(prow[col], -1, p)
        for i in range(rank + 1, nrows):
            f = rows[i][col]
            if not f:
                continue
            f = (f * inv) % p
            rowi = rows[i]
            for j in range(col, ncols):
                rowi[j] = (rowi[j] - f * prow[j]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_mod_p(mat, p):
    """Rank of an integer matrix over F_p."""
    rows = _as_rows(mat)
    if not rows or not rows[0]:
        return 0
    rows = [[v % p for v in row] for row in rows]
    return _rank_rows(rows, p)


def nullity_mod_p(mat, p):
    """Right-kernel dimension of an integer matrix over F_p."""
    rows = _as_rows(mat)
    ncols = len(rows[0]) if rows else 0
    if ncols == 0:
        return 0
    rows = [[v % p for v in row] for row in rows]
    return ncols - _rank_rows(rows, p)


def batch_rank_mod_p(mats, p):
    """Ranks over F_p of a stack of equally-shaped integer matrices.

    ``mats`` is anything indexable as mats[k][i][j] (typically an int64
    ndarray of shape (count, rows, cols)).  Returns a list of ints.
    """
    return [rank_mod_p(m, p) for m in mats]
