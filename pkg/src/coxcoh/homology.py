"""Smith normal form and (co)homology of finite chain complexes of free abelian groups.

Matrices are numpy arrays (``int64`` for boundary maps, ``object`` when
arbitrary-precision entries can appear).  All arithmetic inside the
eliminations is done on Python ints, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy import factorint

from .errors import ValidationError


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    D: np.ndarray
    U: np.ndarray
    V: np.ndarray

    @property
    def diagonal(self):
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k) if self.D[i, i] != 0]


def _as_rows(M):
    M = np.asarray(M, dtype=object)
    if M.ndim != 2:
        raise ValidationError("expected a 2-dimensional matrix")
    return [[int(x) for x in row] for row in M.tolist()], M.shape


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(M) -> SNFResult:
    """Smith normal form with transforms, pivoting on the entry of least absolute value."""
    A, (m, n) = _as_rows(M)
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        if q:
            A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        if q:
            for row in A:
                row[dst] -= q * row[src]
            for row in V:
                row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                add_row(i, t, A[i][t] // p)
            for j in range(t + 1, n):
                add_col(j, t, A[t][j] // p)
            rest = [(abs(A[i][t]), i, None) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), None, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda r: r[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    to_arr = lambda rows, shape: np.array(rows, dtype=object).reshape(shape)
    return SNFResult(to_arr(A, (m, n)), to_arr(U, (m, m)), to_arr(V, (n, n)))


def _dense_diagonal(rows):
    """Smith diagonal of a small dense matrix (no transforms)."""
    if not rows or not rows[0]:
        return []
    return smith_normal_form(np.array(rows, dtype=object)).diagonal


def invariant_factors(M):
    """Return ``(rank, factors)`` where ``factors`` are the invariant factors > 1.

    Sparse elimination: unit pivots are eliminated first (choosing the pivot
    with least fill-in), the unit-free remainder is finished densely.
    """
    M = np.asarray(M)
    m, n = M.shape if M.ndim == 2 else (0, 0)
    rows = {}
    cols = {}
    nz_r, nz_c = np.nonzero(M)
    for i, j in zip(nz_r.tolist(), nz_c.tolist()):
        rows.setdefault(i, {})[j] = int(M[i, j])
        cols.setdefault(j, set()).add(i)
    rank = 0
    while True:
        pivot = None
        for i, row in rows.items():
            for j, v in row.items():
                if v == 1 or v == -1:
                    cost = (len(row) - 1) * (len(cols[j]) - 1)
                    if pivot is None or cost < pivot[0]:
                        pivot = (cost, i, j)
                        if cost == 0:
                            break
            if pivot and pivot[0] == 0:
                break
        if pivot is None:
            break
        _, pi, pj = pivot
        prow = rows.pop(pi)
        pv = prow[pj]
        for i in list(cols[pj]):
            if i == pi:
                continue
            row = rows[i]
            f = row[pj] * pv  # pv = +-1
            for j, v in prow.items():
                new = row.get(j, 0) - f * v
                if new:
                    if j not in row:
                        cols[j].add(i)
                    row[j] = new
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
            if not row:
                del rows[i]
        for j in prow:
            cols[j].discard(pi)
        del cols[pj]
        rank += 1
    live_cols = sorted(j for j, rs in cols.items() if rs)
    live_rows = sorted(rows)
    if live_rows:
        cidx = {j: k for k, j in enumerate(live_cols)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for r, i in enumerate(live_rows):
            for j, v in rows[i].items():
                dense[r][cidx[j]] = v
        diag = _dense_diagonal(dense)
    else:
        diag = []
    rank += len(diag)
    return rank, tuple(abs(d) for d in diag if abs(d) > 1)


def combine_torsion(factors):
    """Invariant factors of a direct sum of cyclic groups ``Z/f``."""
    powers = {}
    for f in factors:
        f = abs(int(f))
        if f <= 1:
            continue
        for p, e in factorint(f).items():
            powers.setdefault(p, []).append(p**e)
    if not powers:
        return ()
    for v in powers.values():
        v.sort(reverse=True)
    k = max(len(v) for v in powers.values())
    out = []
    for i in range(k):
        d = 1
        for v in powers.values():
            if i < len(v):
                d *= v[i]
        out.append(d)
    return tuple(sorted(out))


@dataclass(frozen=True)
class HomologySummary:
    """Per-degree Betti numbers and torsion invariant factors (each dividing the next)."""

    betti: tuple
    torsion: tuple

    def __post_init__(self):
        betti = tuple(int(b) for b in self.betti)
        torsion = tuple(combine_torsion(t) for t in self.torsion)
        n = max(len(betti), len(torsion))
        betti += (0,) * (n - len(betti))
        torsion += ((),) * (n - len(torsion))
        while n and betti[n - 1] == 0 and not torsion[n - 1]:
            n -= 1
        object.__setattr__(self, "betti", betti[:n])
        object.__setattr__(self, "torsion", torsion[:n])

    def __getitem__(self, i):
        if 0 <= i < len(self.betti):
            return self.betti[i], self.torsion[i]
        return 0, ()

    def euler_characteristic(self):
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def group(self, i):
        b, t = self[i]
        parts = []
        if b:
            parts.append("Z" if b == 1 else f"Z^{b}")
        parts.extend(f"Z/{f}" for f in t)
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return ", ".join(f"{i}: {self.group(i)}" for i in range(len(self.betti))) or "0"

    def to_dict(self):
        return {
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
        }

    def __add__(self, other):
        n = max(len(self.betti), len(other.betti))
        return HomologySummary(
            tuple(self[i][0] + other[i][0] for i in range(n)),
            tuple(self[i][1] + other[i][1] for i in range(n)),
        )

    def scaled(self, k):
        """The summary of ``H (x) Z^k``."""
        return HomologySummary(
            tuple(b * k for b in self.betti), tuple(t * k for t in self.torsion)
        )

    @classmethod
    def zero(cls):
        return cls((), ())


class ChainComplexZ:
    """Chain complex ``C_top -> ... -> C_0`` of finitely generated free abelian groups.

    ``d[i]`` is the matrix of the boundary ``C_i -> C_{i-1}`` with shape
    ``(ranks[i-1], ranks[i])``; ``d[0]`` is the zero map.  ``d∘d = 0`` is
    checked at construction.
    """

    def __init__(self, ranks, d=None, check=True):
        self.ranks = tuple(int(r) for r in ranks)
        top = len(self.ranks)
        d = list(d or [])
        mats = [np.zeros((0, self.ranks[0] if top else 0), dtype=np.int64)] if top else []
        for i in range(1, top):
            mat = d[i] if i < len(d) and d[i] is not None else None
            if mat is None:
                mat = np.zeros((self.ranks[i - 1], self.ranks[i]), dtype=np.int64)
            mat = np.asarray(mat)
            if mat.shape != (self.ranks[i - 1], self.ranks[i]):
                raise ValidationError(
                    f"d[{i}] has shape {mat.shape}, expected {(self.ranks[i - 1], self.ranks[i])}"
                )
            mats.append(mat)
        self.d = mats
        if check:
            self.check()

    @property
    def top(self):
        return len(self.ranks) - 1

    def boundary(self, i):
        if 1 <= i < len(self.ranks):
            return self.d[i]
        r_lo = self.ranks[i - 1] if 0 <= i - 1 < len(self.ranks) else 0
        r_hi = self.ranks[i] if 0 <= i < len(self.ranks) else 0
        return np.zeros((r_lo, r_hi), dtype=np.int64)

    def check(self):
        for i in range(2, len(self.ranks)):
            a, b = self.d[i - 1], self.d[i]
            if a.size and b.size:
                prod = (a.astype(object) @ b.astype(object)) if a.dtype == object or b.dtype == object else a @ b
                if np.any(prod != 0):
                    raise ValidationError(f"d[{i - 1}] @ d[{i}] != 0")

    def euler_characteristic(self):
        return sum((-1) ** i * r for i, r in enumerate(self.ranks))

    def is_zero(self):
        return not any(self.ranks)


def homology(C: ChainComplexZ) -> HomologySummary:
    factors = [invariant_factors(C.boundary(i)) for i in range(len(C.ranks) + 1)]
    betti, torsion = [], []
    for i, r in enumerate(C.ranks):
        rank_out = factors[i][0]
        rank_in, tors_in = factors[i + 1]
        betti.append(r - rank_out - rank_in)
        torsion.append(tors_in)
    return HomologySummary(tuple(betti), tuple(torsion))


def cohomology(C: ChainComplexZ) -> HomologySummary:
    """Cohomology of ``Hom(C, Z)``: coboundaries are the transposed boundaries."""
    factors = [invariant_factors(C.boundary(i)) for i in range(len(C.ranks) + 1)]
    betti, torsion = [], []
    for i, r in enumerate(C.ranks):
        rank_in = factors[i][0]  # delta^{i-1} = d_i^T
        rank_out = factors[i + 1][0]
        betti.append(r - rank_in - rank_out)
        torsion.append(factors[i][1])  # coker of d_i^T carries the torsion of d_i
    return HomologySummary(tuple(betti), tuple(torsion))
