"""The basic construction U(W, X) and the (co)homology decompositions built on it.

Truncation.  For an infinite group only finitely many cells of ``U`` are
built, chosen so that the truncated answers are exact rather than
approximate:

* chains (homology): cells ``(v W_{S(c)}, c)`` whose shortest coset
  representative ``v`` lies in the ball.  These form a subcomplex, and its
  homology is ``⊕_T H_*(X, X^T) ⊗ Z^{m_T}`` with
  ``m_T = #{w in ball : In(w) = T}``;
* cochains (compact-support cohomology): cells whose whole coset lies in the
  ball, ``l(v) + l(w_{S(c)}) <= N``.  These are closed under cofaces, and
  the cochains supported on them correspond under the equivariant
  identification to the lattices ``A^{S(c)} ∩ Z[ball]``.  Their cohomology
  is ``⊕_T H^*(X, X^{S-T}) ⊗ Z^{n_T}`` with ``n_T = #{w in ball : In'(w) = T}``.

For finite W and ``N`` at least the length of the longest element both are
the whole of ``U``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import flint
import numpy as np

from . import linalg
from .complexes import MirroredComplex, davis_chamber
from .coxeter import CoxeterSystem, coxeter_matrix, INF
from .errors import (
    NonSphericalMirrorIntersection,
    OutOfTrustRadius,
    ValidationError,
    VerificationFailure,
)
from .groupring import GroupRing
from .homology import ChainComplexZ, HomologySummary, cohomology, homology

VARIANTS = ("homology", "cohomology")


def _check_variant(variant):
    aliases = {"h": "homology", "hc": "cohomology", "c": "cohomology"}
    variant = aliases.get(variant, variant)
    if variant not in VARIANTS:
        raise ValueError(f"variant must be homology or cohomology, got {variant!r}")
    return variant


def _check_compatible(system, X):
    if tuple(X.generators) != tuple(system.generators):
        raise ValidationError(
            f"complex mirrors {list(X.generators)} do not match generators {list(system.generators)}"
        )


def _check_spherical_mirrors(system, X):
    for c in range(X.n_cells):
        if not system.is_finite_type(X.S(c)):
            raise NonSphericalMirrorIntersection(
                f"cell {c} lies in the mirrors {system.subset_names(X.S(c))}, which are not spherical"
            )


def _descent_counts(system, N, side):
    counts = {T: 0 for T in system.spherical_poset()}
    for w in system.ball(N):
        D = system.left_descents(w) if side == "left" else system.right_descents(w)
        counts[D] += 1
    return counts


# -- the basic construction ------------------------------------------------------------


@dataclass
class EquivariantComplexU:
    system: CoxeterSystem
    X: MirroredComplex
    radius: int
    mode: str
    cells: tuple  # (v, c): v the shortest element of the coset v W_{S(c)}
    chains: ChainComplexZ
    bases: list  # per degree, indices into ``cells``

    def homology(self):
        if self.mode != "homology":
            raise ValueError("this truncation is built for cohomology")
        return homology(self.chains)

    def cohomology(self):
        """Compactly supported cohomology in cohomology mode, ordinary cohomology of the subcomplex otherwise."""
        return cohomology(self.chains)

    def cell_count(self, dim=None):
        if dim is None:
            return len(self.cells)
        return sum(1 for _, c in self.cells if self.X.dims[c] == dim)


def build_U(system, X, N, mode="homology"):
    """Truncation of ``U(W, X)`` at radius ``N`` (see the module docstring for which cells are kept)."""
    mode = _check_variant(mode)
    _check_compatible(system, X)
    if mode == "cohomology":
        _check_spherical_mirrors(system, X)
    ball = system.ball(N)
    cells = []
    for c in range(X.n_cells):
        T = X.S(c)
        if mode == "homology":
            reps = [v for v in ball if not (system.right_descents(v) & T)]
        else:
            room = N - len(system.longest_element(T))
            reps = [v for v in ball if len(v) <= room and not (system.right_descents(v) & T)]
        cells.extend((v, c) for v in reps)
    top = X.dimension
    bases = [[] for _ in range(top + 1)]
    for i, (v, c) in enumerate(cells):
        bases[X.dims[c]].append(i)
    position = {}
    for deg, b in enumerate(bases):
        for j, i in enumerate(b):
            position[cells[i]] = j
    d = [None]
    for deg in range(1, top + 1):
        mat = np.zeros((len(bases[deg - 1]), len(bases[deg])), dtype=np.int64)
        for j, i in enumerate(bases[deg]):
            v, c = cells[i]
            for f, k in X.faces[c].items():
                target = (system.min_coset_rep(v, X.S(f)), f)
                row = position.get(target)
                if row is not None:
                    mat[row, j] += k
                elif mode == "homology":
                    raise VerificationFailure("truncation is not a subcomplex", witness=target)
        d.append(mat)
    chains = ChainComplexZ([len(b) for b in bases], d)
    return EquivariantComplexU(system, X, N, mode, tuple(cells), chains, bases)


# -- coefficient systems -----------------------------------------------------------------

SLICES = ("A", "F", "hat", "Q", "graded")


def coefficient_complex(system, X, N, slice="A", variance="invariant", p=0, T=None):
    """Cellular (co)chains of ``X`` with coefficients in a slice of the truncated group ring.

    ``variance='invariant'`` gives ``C^*(X; I(M))`` with the b'-basis of each
    ``M^{S(c)}``; ``'coinvariant'`` gives ``C_*(X; C(M))`` with the projected
    b-basis of each ``M_{S(c)}``.  Slices: ``A`` (everything), ``F`` (level
    ``p`` of the filtration), ``hat``/``Q`` (the single descent set ``T``),
    ``graded`` (descent sets of size exactly ``p``).

    Returns ``(complex, bases)``; take ``cohomology`` of the complex in the
    invariant case and ``homology`` in the coinvariant case.
    """
    _check_compatible(system, X)
    if variance not in ("invariant", "coinvariant"):
        raise ValueError("variance must be 'invariant' or 'coinvariant'")
    if slice not in SLICES:
        raise ValueError(f"slice must be one of {SLICES}")
    if slice in ("hat", "Q"):
        if T is None:
            raise ValueError("slice needs T")
        T = system.subset(T)
    if variance == "invariant":
        _check_spherical_mirrors(system, X)
        descent = system.left_descents

        def allowed(c, D):
            return X.S(c) <= D
    else:
        descent = system.right_descents

        def allowed(c, D):
            return not (X.S(c) & D)

    def keep(D):
        if slice == "A":
            return True
        if slice == "F":
            return len(D) >= p
        if slice == "graded":
            return len(D) == p
        return D == T

    labels = [(w, descent(w)) for w in system.ball(N)]
    labels = [(w, D) for w, D in labels if keep(D)]
    top = X.dimension
    bases = [[] for _ in range(top + 1)]
    for c in range(X.n_cells):
        for w, D in labels:
            if allowed(c, D):
                bases[X.dims[c]].append((c, w))
    index = [{key: j for j, key in enumerate(b)} for b in bases]
    d = [None]
    for deg in range(1, top + 1):
        mat = np.zeros((len(bases[deg - 1]), len(bases[deg])), dtype=np.int64)
        for j, (c, w) in enumerate(bases[deg]):
            for f, k in X.faces[c].items():
                row = index[deg - 1].get((f, w))
                if row is not None:
                    mat[row, j] = k
        d.append(mat)
    return ChainComplexZ([len(b) for b in bases], d), bases


def chain_identification_check(system, X, N):
    """Compare compactly supported cochains on ``U`` with ``⊕_c A^{S(c)}`` cell by cell.

    The indicator of the cell ``(v W_T, c)`` maps to ``a_T e_{v^{-1}}``, the
    sum over ``W_T v^{-1}``.  Both coboundaries are computed in ``e``-
    coordinates and compared entry by entry; the images are also checked to
    be a basis of ``A^{S(c)} ∩ Z[ball]``.
    """
    U = build_U(system, X, N, mode="cohomology")
    ball = system.ball(N)
    image = {}
    for v, c in U.cells:
        T = X.S(c)
        vinv = system.inverse(v)
        image[(v, c)] = frozenset(system.multiply(u, vinv) for u in system.subgroup_elements(T))
    # basis check per cell
    for c in range(X.n_cells):
        T = X.S(c)
        covered = set()
        for (v, c2), supp in image.items():
            if c2 != c:
                continue
            if covered & supp:
                raise VerificationFailure("coset images overlap", witness=(v, c))
            if not all(w in ball for w in supp):
                raise VerificationFailure("image leaves the ball", witness=(v, c))
            covered |= supp
        expected = {
            w for w in ball
            if all(system.lmul(s, w) in ball for s in T)
            and all(x in ball for x in (system.multiply(u, w) for u in system.subgroup_elements(T)))
        }
        if covered != expected:
            raise VerificationFailure("images do not span the truncated invariants", witness=c)
    mismatches = 0
    checked = 0
    for deg in range(1, len(U.bases)):
        D = U.chains.boundary(deg)  # rows: degree deg-1 cells, cols: degree deg cells
        for r, i in enumerate(U.bases[deg - 1]):
            cell = U.cells[i]
            # coboundary on U, then the identification
            left = {}
            for col in np.nonzero(D[r])[0]:
                k = int(D[r, col])
                v2, c2 = U.cells[U.bases[deg][col]]
                for w in image[(v2, c2)]:
                    left[(c2, w)] = left.get((c2, w), 0) + k
            # identification, then the coboundary of C^*(X; I(A))
            right = {}
            v, c = cell
            for c2, k in X.cofaces(c).items():
                for w in image[cell]:
                    right[(c2, w)] = right.get((c2, w), 0) + k
            left = {key: x for key, x in left.items() if x}
            right = {key: x for key, x in right.items() if x}
            checked += 1
            if left != right:
                mismatches += 1
    return {
        "radius": N,
        "cells": len(U.cells),
        "cochains_checked": checked,
        "mismatches": mismatches,
        "ok": mismatches == 0,
    }


# -- whole-complex assemblies ----------------------------------------------------------------


def relative_summary(X, T, variant):
    """``H_*(X, X^T)`` (homology) or ``H^*(X, X^{S-T})`` (cohomology)."""
    variant = _check_variant(variant)
    if variant == "homology":
        return homology(X.relative_complex(X.mirror_union(T)))
    S = frozenset(range(len(X.generators)))
    return cohomology(X.relative_complex(X.mirror_union(S - frozenset(T))))


def homology_formula(system, X, N, variant="cohomology"):
    """Both sides of the decomposition of ``H_*(U)`` / ``H^*_c(U)`` at radius ``N``."""
    variant = _check_variant(variant)
    U = build_U(system, X, N, mode=variant)
    lhs = U.homology() if variant == "homology" else U.cohomology()
    counts = _descent_counts(system, N, "right" if variant == "homology" else "left")
    rhs = HomologySummary.zero()
    terms = []
    for T in system.spherical_poset():
        rel = relative_summary(X, T, variant)
        rhs = rhs + rel.scaled(counts[T])
        terms.append({"T": T, "relative": rel, "slice_rank": counts[T]})
    return {
        "variant": variant,
        "radius": N,
        "lhs": lhs,
        "rhs": rhs,
        "terms": terms,
        "cells": len(U.cells),
        "equal": lhs == rhs,
    }


# -- filtered coefficient complexes over Q -----------------------------------------------------


def _project(system, v, U):
    """Shortest element of ``v W_U`` and the letters removed on the way (a reduced word of the rest)."""
    removed = []
    while True:
        hit = U & system.right_descents(v)
        if not hit:
            return v, tuple(reversed(removed))
        s = min(hit)
        v = system.rmul(v, s)
        removed.append(s)


def _fmpq(x):
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _times(P, D):
    """Integer rows spanning ``rowspace(P * D)``."""
    if P.nrows() == 0:
        return linalg.empty(D.ncols())
    if isinstance(D, linalg.fmpz_mat):
        return P * D
    prod = linalg.fmpq_mat(P) * D
    return prod.numer_denom()[0]


class FilteredComplex:
    """``C^*(X; I(F_p))`` or ``C_*(X; C(F'_p))`` over Q, for every level ``p``.

    The per-cell subspaces are computed from the defining spanning sets
    (``a_T e_u`` resp. ``e_u h_T`` with ``|T| >= p`` and the coset inside the
    ball), intersected with the invariants, resp. projected to the
    coinvariants.  No descent basis is used.
    """

    def __init__(self, algebra, X, N, variant):
        self.algebra = algebra
        self.system = W = algebra.system
        self.X = X
        self.N = N
        self.variant = _check_variant(variant)
        _check_compatible(W, X)
        if self.variant == "cohomology":
            _check_spherical_mirrors(W, X)
        self.ball = W.ball(N)
        self.n = len(self.ball)
        self.top = X.dimension
        self.cells = [X.cells(i) for i in range(self.top + 1)]
        self.max_p = len(W.generators) + 1
        self.integral = getattr(algebra, "exact_integers", False)
        self._span = {}
        self._level = {}
        self._spaces = {}
        self._sub = {}
        self._diff = {}
        self._action = {}

    # per-cell subspaces

    def _coset_rows(self, p):
        W, alg, ball = self.system, self.algebra, self.ball
        rows = []
        for T in W.spherical_poset():
            if len(T) < p:
                continue
            room = self.N - len(W.longest_element(T))
            for u in ball:
                if len(u) > room:
                    continue
                if self.variant == "cohomology":
                    if W.left_descents(u) & T:
                        continue
                    vec = alg.sym_times(T, u)
                else:
                    if W.right_descents(u) & T:
                        continue
                    vec = alg.times_alt(u, T)
                rows.append(vec)
        return rows

    def _spanning(self, p):
        hit = self._span.get(p)
        if hit is None:
            idx = self.ball.index
            rows = []
            for vec in self._coset_rows(p):
                if any(w not in idx for w in vec):
                    raise OutOfTrustRadius("spanning vector leaves the ball")
                rows.append({idx[w]: c for w, c in vec.items()})
            hit = linalg.basis(linalg.sparse_mat(rows, self.n)) if rows else linalg.empty(self.n)
            self._span[p] = hit
        return hit

    def subspace(self, p, U):
        """``(F_p)^U`` (cohomology) or ``(F'_p)_U`` (homology) inside ``Q[ball]``."""
        key = (p, U)
        hit = self._sub.get(key)
        if hit is not None:
            return hit
        W, alg, n = self.system, self.algebra, self.n
        if self.variant == "cohomology":
            G = self._spanning(p)
            if U and G.nrows():
                ball1 = W.ball(self.N + 1)
                blocks = []
                for s in sorted(U):
                    lam = alg.invariance_scalar(s)
                    flat = [flint.fmpq(0)] * (n * len(ball1))
                    for i, w in enumerate(self.ball):
                        for v, c in alg.lmul_gen(s, w).items():
                            flat[i * len(ball1) + ball1.index[v]] += _fmpq(c)
                        flat[i * len(ball1) + ball1.index[w]] -= _fmpq(lam)
                    L = linalg.fmpq_mat(n, len(ball1), flat)
                    blocks.append(_times(G, L))
                K = linalg.left_kernel(linalg.hstack(blocks))
                hit = linalg.basis(K * G) if K.nrows() else linalg.empty(n)
            else:
                hit = G
        else:
            idx = self.ball.index
            rows = []
            for vec in self._coset_rows(p):
                out = {}
                for w, c in vec.items():
                    rep, rest = _project(W, w, U)
                    j = idx[rep]
                    out[j] = out.get(j, 0) + Fraction(c) * Fraction(alg.weight(rest))
                out = {j: c for j, c in out.items() if c}
                if out:
                    rows.append(out)
            hit = linalg.basis(linalg.sparse_mat(rows, n)) if rows else linalg.empty(n)
        self._sub[key] = hit
        return hit

    def level(self, p, deg):
        """Block-diagonal basis of the level-``p`` subspace in degree ``deg``."""
        n = self.n
        if not 0 <= deg <= self.top:
            return linalg.empty(0)
        hit = self._level.get((p, deg))
        if hit is not None:
            return hit
        cells = self.cells[deg]
        amb = n * len(cells)
        flat = []
        nrows = 0
        for k, c in enumerate(cells):
            if p >= self.max_p:
                break
            B = self.subspace(p, self.X.S(c))
            for row in B.table():
                flat.extend([0] * (k * n))
                flat.extend(row)
                flat.extend([0] * (amb - (k + 1) * n))
                nrows += 1
        hit = linalg.fmpz_mat(nrows, amb, flat) if nrows else linalg.empty(amb)
        self._level[(p, deg)] = hit
        return hit

    def _matrix(self, rows, cols, flat):
        if self.integral:
            return linalg.fmpz_mat(rows, cols, [int(x) for x in flat])
        return linalg.fmpq_mat(rows, cols, [_fmpq(x) for x in flat])

    # differentials and actions on the ambient coordinates

    def target(self, deg):
        return deg + 1 if self.variant == "cohomology" else deg - 1

    def source(self, deg):
        return deg - 1 if self.variant == "cohomology" else deg + 1

    def ambient(self, deg):
        if not 0 <= deg <= self.top:
            return 0
        return self.n * len(self.cells[deg])

    def differential(self, deg):
        """Matrix of the (co)boundary from degree ``deg`` to ``target(deg)``."""
        hit = self._diff.get(deg)
        if hit is not None:
            return hit
        n, X, W = self.n, self.X, self.system
        tgt = self.target(deg)
        rows, cols = self.ambient(deg), self.ambient(tgt)
        flat = [0] * (rows * cols)
        if rows and cols:
            pos = {c: k for k, c in enumerate(self.cells[tgt])}
            for k, c in enumerate(self.cells[deg]):
                if self.variant == "cohomology":
                    for c2, sign in X.cofaces(c).items():
                        k2 = pos[c2]
                        for i in range(n):
                            flat[(k * n + i) * cols + k2 * n + i] += sign
                else:
                    for f, sign in X.faces[c].items():
                        k2 = pos[f]
                        U = X.S(f)
                        for i, w in enumerate(self.ball):
                            rep, rest = _project(W, w, U)
                            j = self.ball.index[rep]
                            flat[(k * n + i) * cols + k2 * n + j] += sign * Fraction(
                                self.algebra.weight(rest)
                            )
        hit = self._matrix(rows, cols, flat)
        self._diff[deg] = hit
        return hit

    def image(self, p, deg):
        """Level ``p`` in degree ``source(deg)`` pushed into degree ``deg``."""
        src = self.source(deg)
        if not 0 <= src <= self.top:
            return linalg.empty(self.ambient(deg))
        return _times(self.level(p, src), self.differential(src))

    def _ranks(self, p, deg):
        P, R = self.level(p, deg), self.level(p + 1, deg)
        tgt = self.target(deg)
        if 0 <= tgt <= self.top:
            PD = _times(P, self.differential(deg))
            Rn = self.level(p + 1, tgt)
            stacked = linalg.vstack([PD, Rn], self.ambient(tgt))
            zdim = P.nrows() - (linalg.rank(stacked) - Rn.nrows())
        else:
            zdim = P.nrows()
        bdim = linalg.rank(linalg.vstack([self.image(p, deg), R], self.ambient(deg)))
        return zdim, bdim

    def e1_rank(self, p, deg):
        """Rank of the degree-``deg`` (co)homology of the level-``p`` graded piece."""
        if not 0 <= deg <= self.top or p >= self.max_p:
            return 0
        zdim, bdim = self._ranks(p, deg)
        return zdim - bdim

    def cycles(self, p, deg):
        P = self.level(p, deg)
        tgt = self.target(deg)
        if not 0 <= tgt <= self.top or P.nrows() == 0:
            return P
        K = linalg.left_kernel(_times(P, self.differential(deg)))
        return K * P if K.nrows() else linalg.empty(P.ncols())

    def einf_rank(self, p, deg):
        """Rank of the level-``p`` piece of the induced filtration on the total (co)homology."""
        if not 0 <= deg <= self.top or p >= self.max_p:
            return 0
        amb = self.ambient(deg)
        B0 = self.image(0, deg)
        b0 = linalg.rank(B0)

        def im(q):
            if q >= self.max_p:
                return 0
            return linalg.rank(linalg.vstack([self.cycles(q, deg), B0], amb)) - b0

        return im(p) - im(p + 1)

    def action(self, deg, word):
        """The W-action of ``e_word`` on degree ``deg``: right multiplication (cohomology), left (homology)."""
        key = (deg, word)
        hit = self._action.get(key)
        if hit is not None:
            return hit
        W, alg, n = self.system, self.algebra, self.n
        amb = self.ambient(deg)
        M = None
        letters = word if self.variant == "cohomology" else tuple(reversed(word))
        for s in letters:
            flat = [0] * (amb * amb)
            for k, c in enumerate(self.cells[deg]):
                U = self.X.S(c)
                for i, w in enumerate(self.ball):
                    if self.variant == "cohomology":
                        img = alg.rmul_gen(w, s)
                        for v, x in img.items():
                            if v not in self.ball.index:
                                raise OutOfTrustRadius("action leaves the ball")
                            flat[(k * n + i) * amb + k * n + self.ball.index[v]] += Fraction(x)
                    else:
                        for v, x in alg.lmul_gen(s, w).items():
                            rep, rest = _project(W, v, U)
                            if rep not in self.ball.index:
                                raise OutOfTrustRadius("action leaves the ball")
                            flat[(k * n + i) * amb + k * n + self.ball.index[rep]] += Fraction(
                                x
                            ) * Fraction(alg.weight(rest))
            step = self._matrix(amb, amb, flat)
            M = step if M is None else M * step
        if M is None:
            M = self._matrix(amb, amb, [int(i == j) for i in range(amb) for j in range(amb)])
        self._action[key] = M
        return M

    def _trace_spaces(self, p, deg):
        """Cycles-mod-next-level ``Z`` and boundaries-plus-next-level ``B`` with ``B ⊆ Z``."""
        hit = self._spaces.get((p, deg))
        if hit is not None:
            return hit
        P, R = self.level(p, deg), self.level(p + 1, deg)
        amb = self.ambient(deg)
        tgt = self.target(deg)
        if 0 <= tgt <= self.top and P.nrows():
            PD = _times(P, self.differential(deg))
            Rn = self.level(p + 1, tgt)
            K = linalg.left_kernel(linalg.vstack([PD, Rn], self.ambient(tgt)))
            Z = linalg.select_cols(K, range(P.nrows())) * P if K.nrows() else linalg.empty(amb)
        else:
            Z = P
        B = linalg.vstack([self.image(p, deg), R], amb)
        hit = (linalg.basis(Z), linalg.basis(B))
        self._spaces[(p, deg)] = hit
        return hit

    def trace(self, p, deg, word):
        """Trace of ``e_word`` on the level-``p`` graded piece in degree ``deg``."""
        if not 0 <= deg <= self.top or p >= self.max_p:
            return Fraction(0)
        Z, B = self._trace_spaces(p, deg)
        if Z.nrows() == B.nrows():
            return Fraction(0)
        A = self.action(deg, word)
        return linalg.restricted_trace(Z, A) - linalg.restricted_trace(B, A)


@dataclass
class GradedTermReport:
    p: int
    variant: str
    radius: int
    lhs: tuple  # rank per degree
    rhs: tuple
    pieces: list = field(default_factory=list)
    traces: dict = field(default_factory=dict)  # word -> list of (lhs, rhs) per degree

    @property
    def ranks_equal(self):
        return self.lhs == self.rhs

    @property
    def traces_equal(self):
        return all(a == b for per in self.traces.values() for a, b in per)

    @property
    def ok(self):
        return self.ranks_equal and self.traces_equal

    def to_dict(self):
        return {
            "p": self.p,
            "variant": self.variant,
            "radius": self.radius,
            "lhs_ranks": list(self.lhs),
            "rhs_ranks": list(self.rhs),
            "pieces": [
                {
                    "T": piece["T_names"],
                    "relative": piece["relative"].to_dict(),
                    "slice_rank": piece["slice_rank"],
                }
                for piece in self.pieces
            ],
            "traces": {
                word: [[str(a), str(b)] for a, b in per] for word, per in self.traces.items()
            },
            "ok": self.ok,
        }


def default_words(system):
    """Generators and products of two distinct generators."""
    gens = range(system.rank)
    words = [(s,) for s in gens]
    words += [(s, t) for s in gens for t in gens if s < t]
    return words


def graded_term(system, X, N, p, variant="cohomology", algebra=None, traces=None, complex_=None):
    """Both sides of the graded decomposition at level ``p``.

    LHS: ranks of the (co)homology of the graded piece of the filtered
    coefficient complex, from spanning sets.  RHS: relative (co)homology of
    ``X`` times the truncated rank of ``Q_<T>`` (resp. ``Q'_<T>``), ``|T| = p``.
    With ``traces`` (finite W only) the traces of the given words are
    compared too, the RHS using the quotient action matrices.
    """
    variant = _check_variant(variant)
    algebra = algebra or GroupRing(system)
    F = complex_ or FilteredComplex(algebra, X, N, variant)
    side = "left" if variant == "cohomology" else "right"
    top = X.dimension
    pieces = []
    rhs = [0] * (top + 1)
    for T in system.spherical_poset():
        if len(T) != p:
            continue
        rel = relative_summary(X, T, variant)
        basis = [w for w in system.ball(N) if (system.left_descents(w) if side == "left" else system.right_descents(w)) == T]
        piece = {"T": T, "T_names": system.subset_names(T), "relative": rel, "slice_rank": len(basis)}
        pieces.append(piece)
        for i in range(top + 1):
            rhs[i] += rel[i][0] * len(basis)
    lhs = tuple(F.e1_rank(p, i) for i in range(top + 1))
    report = GradedTermReport(p, variant, N, lhs, tuple(rhs), pieces)
    if traces:
        if not system.is_finite():
            raise ValueError("trace comparison needs a finite group")
        if N < len(system.longest_element(system.S)):
            raise ValueError("trace comparison needs the whole group inside the ball")
        words = default_words(system) if traces is True else [tuple(system.canonicalize(w)) for w in traces]
        for word in words:
            name = system.format(word)
            per = []
            for i in range(top + 1):
                left = F.trace(p, i, word)
                right = Fraction(0)
                for piece in pieces:
                    b = piece["relative"][i][0]
                    if not b:
                        continue
                    if isinstance(algebra, GroupRing):
                        right += b * _quotient_trace(algebra, piece["T"], word, side, N)
                    else:
                        right += b * module_quotient(algebra, piece["T"], variant).trace(word)
                per.append((left, right))
            report.traces[name] = per
    return report


@dataclass
class ModuleQuotient:
    """``A^T / A^{>T}`` (right action) or ``H^T / H^{>T}`` (left action) for finite W, from spanning sets."""

    algebra: object
    T: frozenset
    variant: str
    top: object
    lower: object

    @property
    def dimension(self):
        return self.top.nrows() - self.lower.nrows()

    def _matrix(self, s):
        W, alg = self.algebra.system, self.algebra
        elems = W.elements()
        n = len(elems)
        flat = [flint.fmpq(0)] * (n * n)
        for i, w in enumerate(elems):
            img = alg.rmul_gen(w, s) if self.variant == "cohomology" else alg.lmul_gen(s, w)
            for v, c in img.items():
                flat[i * n + elems.index[v]] += _fmpq(c)
        return linalg.fmpq_mat(n, n, flat)

    def action(self, word):
        """Row-vector matrix of ``x -> x e_word`` (cohomology) or ``x -> e_word x`` (homology)."""
        letters = word if self.variant == "cohomology" else tuple(reversed(word))
        n = self.top.ncols()
        M = linalg.fmpq_mat(n, n, [int(i == j) for i in range(n) for j in range(n)])
        for s in letters:
            M = M * self._matrix(s)
        return M

    def trace(self, word):
        A = self.action(word)
        return linalg.restricted_trace(self.top, A) - linalg.restricted_trace(self.lower, A)


def module_quotient(algebra, T, variant="cohomology"):
    variant = _check_variant(variant)
    W = algebra.system
    if not W.is_finite():
        raise ValueError("quotient modules are computed for finite groups")
    T = W.subset(T)
    elems = W.elements()
    n = len(elems)

    def span(U):
        rows = []
        for u in elems:
            vec = algebra.sym_times(U, u) if variant == "cohomology" else algebra.times_alt(u, U)
            rows.append({elems.index[w]: c for w, c in vec.items()})
        return rows

    top = linalg.basis(linalg.sparse_mat(span(T), n))
    lower_rows = []
    for U in W.spherical_poset():
        if T < U:
            lower_rows.extend(span(U))
    lower = linalg.basis(linalg.sparse_mat(lower_rows, n)) if lower_rows else linalg.empty(n)
    if linalg.rank(linalg.vstack([top, lower], n)) != top.nrows():
        raise VerificationFailure("the larger invariant modules are not contained in the smaller")
    return ModuleQuotient(algebra, T, variant, top, lower)


def _quotient_trace(algebra, T, word, side, N):
    mats = {s: algebra.quotient_action(T, s, side, N) for s in set(word)}
    size = len(next(iter(mats.values())).basis) if mats else 0
    M = np.identity(size, dtype=object)
    for s in word:
        A = np.array(mats[s].matrix, dtype=object).reshape(size, size)
        # right action: apply letters left to right; left action: right to left
        M = A @ M if side == "left" else M @ A
    return sum(M[i, i] for i in range(size))


def group_cohomology_graded(system, p, N, traces=None):
    """The graded pieces of ``H^*(W; ZW)``, using ``X = K``."""
    return graded_term(system, davis_chamber(system), N, p, "cohomology", traces=traces)


def spectral_degeneration_check(system, X, N, p, q, variant="cohomology", algebra=None, complex_=None):
    """``rank E_1^{pq}`` (graded piece) against ``rank E_inf^{pq}`` (filtration of the total (co)homology)."""
    variant = _check_variant(variant)
    algebra = algebra or GroupRing(system)
    F = complex_ or FilteredComplex(algebra, X, N, variant)
    e1 = F.e1_rank(p, p + q)
    einf = F.einf_rank(p, p + q)
    return {"p": p, "q": q, "e1": e1, "einf": einf, "equal": e1 == einf}


# -- the tripod example ---------------------------------------------------------------------


def tripod_system():
    return CoxeterSystem(coxeter_matrix("stu", {("s", "t"): INF, ("s", "u"): INF, ("t", "u"): INF}))


def tripod_cocycle_demo(N=4):
    """Cocycles ``x`` and ``x·s`` on the Davis complex of ``Z/2 * Z/2 * Z/2``.

    ``x`` is the indicator of the edge ``c_t`` (from the centre of the base
    chamber to its ``t``-mirror); its translate ``x·s`` is the indicator of
    the same edge of chamber ``s``.  Under the equivariant identification
    they take the values ``e`` and ``e_s``, so ``x + x·s`` takes the value
    ``a_s`` and lies in ``F_1``.  A line through the chambers
    ``..., ut, u, e, t, tu, ...`` (radius ``N``) pairs to 1 with ``x`` and to
    0 with ``x·s``, and no 0-cochain vanishing at the ends of the line has
    coboundary ``x + x·s``: the class of ``x + x·s`` does not survive in the
    ``p = 0`` graded piece.
    """
    if N < 1:
        raise ValueError("radius must be at least 1")
    W = tripod_system()
    K = davis_chamber(W)
    s, t, u = 0, 1, 2
    node = {K.labels[i]: i for i in range(K.n_cells)}
    empty = frozenset()
    edge = {g: node[(empty, frozenset([g]))] for g in (s, t, u)}
    centre = node[(empty,)]
    U = build_U(W, K, N, mode="cohomology")
    position = {cell: i for i, cell in enumerate(U.cells)}
    e = ()
    # (f·w)(σ) = f(wσ), so x·s is the indicator of s·(e, c_t) = (s, c_t)
    x = {(e, edge[t]): 1}
    xs = {((s,), edge[t]): 1}
    A = GroupRing(W)
    value = A.element({(): 1, (s,): 1})  # value of x + x·s at c_t
    in_F1 = A.is_invariant(value, [s]) and value == A.symmetrizer([s])

    legs = (t, u)
    chambers = [e]
    v, k = e, 0
    while len(v) < N:  # forward: e, t, tu, ...
        v = W.rmul(v, legs[k % 2])
        chambers.append(v)
        k += 1
    v, k = e, 1
    while len(v) < N:  # backward: u, ut, ...
        v = W.rmul(v, legs[k % 2])
        chambers.insert(0, v)
        k += 1
    line = {}
    for a, b in zip(chambers, chambers[1:]):
        g = W.right_descents(W.multiply(W.inverse(a), b))
        (g,) = g
        line[(a, edge[g])] = line.get((a, edge[g]), 0) + 1
        line[(b, edge[g])] = line.get((b, edge[g]), 0) - 1
    ends = [(chambers[0], centre), (chambers[-1], centre)]
    missing = [cell for cell in list(line) + ends if cell not in position]
    if missing:
        raise OutOfTrustRadius(f"line leaves the truncation at {missing[0]}")

    def pair(f, chain):
        return sum(f.get(cell, 0) * k for cell, k in chain.items())

    # δg = x + x·s with g vanishing at the two ends?
    deg0, deg1 = U.bases[0], U.bases[1]
    D = U.chains.boundary(1)  # rows: vertices, cols: edges; δ is its transpose
    col_of = {U.cells[i]: j for j, i in enumerate(deg1)}
    target = [0] * len(deg1)
    for cell, k in list(x.items()) + list(xs.items()):
        target[col_of[cell]] += k
    fixed = set(ends)
    rows = [[int(D[r, j]) for j in range(len(deg1))] for r, i in enumerate(deg0) if U.cells[i] not in fixed]
    solvable = linalg.rank(rows + [target], len(deg1)) == linalg.rank(rows, len(deg1))
    return {
        "radius": N,
        "line_chambers": [W.format(c) for c in chambers],
        "line_edges": len(line),
        "pair_x_line": pair(x, line),
        "pair_xs_line": pair(xs, line),
        "value_x_plus_xs": {W.format(w): c for w, c in value},
        "sum_in_F1": bool(in_F1),
        "sum_is_coboundary_rel_ends": bool(solvable),
    }
