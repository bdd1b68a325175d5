"""Exact dense linear algebra over any field-protocol object.

Rows are lists of field elements; everything is plain Gaussian
elimination with deterministic pivot choice (first nonzero entry,
scanning columns left to right).
"""

from __future__ import annotations


def row_echelon(rows, field, ncols=None):
    """Reduce a copy of `rows` to row echelon form.

    Returns (echelon_rows, pivot_cols).  Zero rows are kept at the end so
    callers can recover left-nullspace witnesses positionally if needed.
    """
    mat = [list(r) for r in rows]
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        sel = None
        for i in range(rank, len(mat)):
            if not field.is_zero(mat[i][col]):
                sel = i
                break
        if sel is None:
            continue
        mat[rank], mat[sel] = mat[sel], mat[rank]
        piv = mat[rank][col]
        inv = field.inv(piv)
        mat[rank] = [field.mul(x, inv) for x in mat[rank]]
        for i in range(len(mat)):
            if i == rank:
                continue
            c = mat[i][col]
            if field.is_zero(c):
                continue
            mat[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return mat, pivots


def rank(rows, field, ncols=None):
    if not rows:
        return 0
    _, pivots = row_echelon(rows, field, ncols)
    return len(pivots)


def kernel_basis(rows, field, ncols):
    """Basis of {x : A x = 0} for A given by `rows` (list of solutions)."""
    ech, pivots = row_echelon(rows, field, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fcol in free:
        vec = [field.zero] * ncols
        vec[fcol] = field.one
        for r, pcol in enumerate(pivots):
            # pivot rows are normalized to 1 at the pivot column
            vec[pcol] = field.neg(ech[r][fcol])
        basis.append(vec)
    return basis
