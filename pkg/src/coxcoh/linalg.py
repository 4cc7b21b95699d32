"""Exact linear algebra over Q, backed by FLINT.

Subspaces of Q^n are represented by integer matrices whose rows span them
(row scaling never matters for spans, so denominators are cleared row by
row).  Linear maps act on row vectors from the right, ``x -> x * R``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import flint

fmpz_mat = flint.fmpz_mat
fmpq_mat = flint.fmpq_mat


def _row_ints(row):
    den = 1
    for x in row:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    return [int(x * den) for x in row]


def mat(rows, ncols):
    """Integer matrix spanning the same row space as ``rows`` (ints or Fractions)."""
    rows = [_row_ints(r) for r in rows]
    return fmpz_mat(len(rows), ncols, [x for r in rows for x in r])


def sparse_mat(rows, ncols):
    """Matrix from rows given as ``{column: value}`` dicts."""
    flat = [0] * (len(rows) * ncols)
    for i, row in enumerate(rows):
        den = 1
        for x in row.values():
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
        for j, x in row.items():
            flat[i * ncols + j] = int(x * den)
    return fmpz_mat(len(rows), ncols, flat)


def exact_map(rows, n):
    """Matrix of a linear map over Q (row ``i`` is the image of basis vector ``i``), kept exact."""
    flat = [flint.fmpq(0)] * (n * n)
    for i, row in enumerate(rows):
        for j, x in row.items():
            x = Fraction(x)
            flat[i * n + j] = flint.fmpq(x.numerator, x.denominator)
    return fmpq_mat(n, n, flat)


def empty(ncols):
    return fmpz_mat(0, ncols)


def select_rows(M, idx):
    table = M.table()
    idx = list(idx)
    return fmpz_mat(len(idx), M.ncols(), [x for i in idx for x in table[i]])


def select_cols(M, idx):
    idx = list(idx)
    return fmpz_mat(M.nrows(), len(idx), [row[j] for row in M.table() for j in idx])


def vstack(mats, ncols):
    mats = [M for M in mats if M.nrows()]
    if not mats:
        return empty(ncols)
    flat = []
    for M in mats:
        flat.extend(M.entries())
    return fmpz_mat(sum(M.nrows() for M in mats), ncols, flat)


def hstack(mats):
    nrows = mats[0].nrows()
    tables = [M.table() for M in mats]
    flat = []
    for i in range(nrows):
        for t in tables:
            flat.extend(t[i])
    return fmpz_mat(nrows, sum(M.ncols() for M in mats), flat)


def rank(M, ncols=None):
    """Rank over Q; accepts a FLINT matrix or a list of rows."""
    if not isinstance(M, fmpz_mat):
        M = list(M)
        if not M:
            return 0
        M = mat(M, len(M[0]) if ncols is None else ncols)
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.rank()


def basis(M):
    """Independent rows spanning the row space of ``M`` (reduced echelon form)."""
    if M.nrows() == 0 or M.ncols() == 0:
        return empty(M.ncols())
    R, _den, r = M.rref()
    return select_rows(R, range(r))


def pivots(B):
    """Pivot column of each row of an echelon matrix."""
    out = []
    for row in B.table():
        out.append(next(j for j, x in enumerate(row) if x != 0))
    return out


def left_kernel(M):
    """Rows spanning ``{x : x * M = 0}``."""
    m = M.nrows()
    if m == 0:
        return empty(0)
    if M.ncols() == 0:
        return fmpz_mat(m, m, [int(i == j) for i in range(m) for j in range(m)])
    N, nullity = M.transpose().nullspace()
    if nullity == 0:
        return empty(m)
    return select_cols(N, range(nullity)).transpose()


def intersect(A, B):
    """Basis of ``rowspace(A) ∩ rowspace(B)``."""
    n = A.ncols()
    A, B = basis(A), basis(B)
    if A.nrows() == 0 or B.nrows() == 0:
        return empty(n)
    K = left_kernel(vstack([A, B], n))
    if K.nrows() == 0:
        return empty(n)
    return basis(select_cols(K, range(A.nrows())) * A)


def selection(n, cols):
    """The ``n x len(cols)`` 0/1 matrix picking out ``cols``; ``M * selection`` selects columns."""
    cols = list(cols)
    flat = [0] * (n * len(cols))
    for k, j in enumerate(cols):
        flat[j * len(cols) + k] = 1
    return fmpz_mat(n, len(cols), flat)


def restricted_trace(B, R, check=True):
    """Trace of ``x -> x * R`` on the subspace spanned by the rows of ``B``.

    ``R`` is an ``fmpq_mat`` or ``fmpz_mat``.  With ``check`` the subspace is
    verified to be invariant.
    """
    B = basis(B)
    k = B.nrows()
    if k == 0:
        return Fraction(0)
    piv = pivots(B)
    sel = selection(B.ncols(), piv)
    # rref rows: B restricted to the pivot columns is den * identity
    den = B[0, piv[0]]
    if B * sel != den * fmpz_mat(k, k, [int(i == j) for i in range(k) for j in range(k)]):
        raise ValueError("basis is not in reduced echelon form")
    if isinstance(R, fmpz_mat):
        images = B * R
    else:
        images = fmpq_mat(B) * R
    IP = images * sel  # den * C, where images = C * B
    if check and IP * B != den * images:
        raise ValueError("subspace is not invariant under the map")
    t = sum((IP[i, i] for i in range(k)), 0 * IP[0, 0])
    return Fraction(int(t.p), int(t.q)) / int(den) if hasattr(t, "q") else Fraction(int(t), int(den))


def to_rows(M):
    """Plain Python ints, row by row."""
    return [[int(x) for x in row] for row in M.table()]
