"""The integral group ring ZW of a Coxeter group, truncated to balls.

Elements are finitely supported maps from canonical words to ints.  Every
element carries a trust radius: the ball radius inside which it agrees with
the untruncated value it stands for (``inf`` for exact elements).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import linalg
from .coxeter import CoxeterSystem, shortlex_key
from .errors import NotFinite, NotNested, NotSpherical, OutOfTrustRadius, VerificationFailure

INF = math.inf


class GroupRingElement:
    __slots__ = ("system", "coeffs", "trust_radius")

    def __init__(self, system, coeffs=None, trust_radius=INF):
        self.system = system
        self.coeffs = {w: c for w, c in (coeffs or {}).items() if c}
        self.trust_radius = trust_radius

    # -- basic protocol --------------------------------------------------------

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for w in sorted(self.coeffs, key=shortlex_key):
            c = self.coeffs[w]
            name = self.system.format(w)
            terms.append(f"{c}*{name}" if c != 1 else name)
        return " + ".join(terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, w):
        return self.coeffs.get(w, 0)

    def __iter__(self):
        return iter(sorted(self.coeffs.items(), key=lambda kv: shortlex_key(kv[0])))

    @property
    def support(self):
        return frozenset(self.coeffs)

    def max_length(self):
        return max((len(w) for w in self.coeffs), default=-1)

    # -- arithmetic ------------------------------------------------------------

    def _combine(self, other, sign):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + sign * c
        return GroupRingElement(self.system, out, min(self.trust_radius, other.trust_radius))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return GroupRingElement(self.system, {w: -c for w, c in self.coeffs.items()}, self.trust_radius)

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            return multiply(self, other)
        return GroupRingElement(
            self.system, {w: c * other for w, c in self.coeffs.items()}, self.trust_radius
        )

    def __rmul__(self, k):
        return self * k

    def __matmul__(self, other):
        return multiply(self, other)

    def augmentation(self):
        return sum(self.coeffs.values())


def _product_radius(x, y):
    rx, ry = x.trust_radius, y.trust_radius
    if rx == INF and ry == INF:
        return INF
    if rx == INF:
        return ry - max(x.max_length(), 0)
    if ry == INF:
        return rx - max(y.max_length(), 0)
    return -1


def multiply(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    """Convolution product; the trust radius shrinks by the length of the exact factor."""
    W = x.system
    out = {}
    for u, a in x.coeffs.items():
        for v, b in y.coeffs.items():
            w = W.multiply(u, v)
            out[w] = out.get(w, 0) + a * b
    return GroupRingElement(W, out, _product_radius(x, y))


@dataclass(frozen=True)
class DescentBasisSlice:
    T: frozenset
    side: str
    elements: tuple  # (w, GroupRingElement) pairs in (length, ShortLex) order


@dataclass(frozen=True)
class FiltrationSlice:
    p: int
    side: str
    radius: int
    basis: tuple  # words w labelling b'_w (or b_w) in F_p
    complement: tuple  # words labelling E_p


@dataclass(frozen=True)
class QuotientAction:
    """Matrix of a generator on the truncated quotient module.

    ``matrix[i][j]`` is the coefficient of ``basis[i]`` in the image of
    ``basis[j]``; ``valid[j]`` says whether that column is exact (its image
    stays inside the truncated basis).
    """

    T: frozenset
    generator: int
    side: str
    basis: tuple
    matrix: tuple
    valid: tuple

    def trace(self):
        return sum(self.matrix[i][i] for i in range(len(self.basis)))


def _check_side(side):
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")


class GroupRing:
    """``ZW`` with its two descent bases.

    ``side='left'`` refers to the basis ``b'_w = a_{In'(w)} e_w`` (slices
    of the invariants ``A^T``, a right module); ``side='right'`` refers to
    ``b_w = e_w h_{In(w)}`` (slices of ``H^T = A h_T``, a left module).
    """

    exact_integers = True

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self._bprime = {}
        self._b = {}

    # -- elements --------------------------------------------------------------

    def e(self, w=()):
        W = self.system
        return GroupRingElement(W, {W.canonicalize(w): 1})

    def gen(self, s):
        return self.e((self.system.gen(s),))

    def zero(self):
        return GroupRingElement(self.system, {})

    def element(self, coeffs, trust_radius=INF):
        W = self.system
        out = {}
        for w, c in coeffs.items():
            w = W.canonicalize(w)
            out[w] = out.get(w, 0) + c
        return GroupRingElement(W, out, trust_radius)

    def _spherical(self, T):
        T = self.system.subset(T)
        if not self.system.is_finite_type(T):
            raise NotSpherical(f"{self.system.subset_names(T)} is not spherical")
        return T

    def symmetrizer(self, T):
        """``a_T``: the sum of the elements of ``W_T``."""
        T = self._spherical(T)
        return GroupRingElement(self.system, {u: 1 for u in self.system.subgroup_elements(T)})

    def alternator(self, T):
        """``h_T``: the signed sum of the elements of ``W_T``."""
        T = self._spherical(T)
        return GroupRingElement(
            self.system, {u: (-1) ** len(u) for u in self.system.subgroup_elements(T)}
        )

    def connecting_elements(self, U, T):
        """``(c_(U,T), d_(U,T))`` with ``a_U = a_T c`` and ``h_U = d h_T``.

        The sign in ``d`` is ``(-1)^{l(u)}`` for the summation index ``u``.
        """
        W = self.system
        U, T = self._spherical(U), W.subset(T)
        if not T <= U:
            raise NotNested(f"{W.subset_names(T)} is not contained in {W.subset_names(U)}")
        WU = W.subgroup_elements(U)
        c = {u: 1 for u in WU if not (W.left_descents(u) & T)}
        d = {u: (-1) ** len(u) for u in WU if not (W.right_descents(u) & T)}
        return GroupRingElement(W, c), GroupRingElement(W, d)

    # -- interface shared with the Hecke algebra ---------------------------------

    def lmul_gen(self, s, w):
        """``e_s e_w`` as a coefficient dict."""
        return {self.system.lmul(s, w): 1}

    def rmul_gen(self, w, s):
        """``e_w e_s`` as a coefficient dict."""
        return {self.system.rmul(w, s): 1}

    def invariance_scalar(self, s):
        """The scalar by which ``e_s`` acts on ``W_T``-invariants (``s`` in ``T``)."""
        return 1

    def weight(self, w):
        """The character used to form coinvariants: ``e_w`` maps to ``weight(w)``."""
        return 1

    def sym_times(self, T, u):
        """``a_T e_u`` up to a nonzero scalar, as a coefficient dict."""
        return multiply(self.symmetrizer(T), self.e(u)).coeffs

    def times_alt(self, u, T):
        """``e_u h_T`` up to a nonzero scalar, as a coefficient dict."""
        return multiply(self.e(u), self.alternator(T)).coeffs

    # -- descent bases -----------------------------------------------------------

    def b_prime(self, w):
        """``b'_w = a_{In'(w)} e_w``: the sum over the coset ``W_{In'(w)} w``."""
        hit = self._bprime.get(w)
        if hit is None:
            W = self.system
            T = W.left_descents(w)
            hit = GroupRingElement(W, {W.multiply(u, w): 1 for u in W.subgroup_elements(T)})
            self._bprime[w] = hit
        return hit

    def b(self, w):
        """``b_w = e_w h_{In(w)}``."""
        hit = self._b.get(w)
        if hit is None:
            W = self.system
            T = W.right_descents(w)
            hit = GroupRingElement(
                W, {W.multiply(w, u): (-1) ** len(u) for u in W.subgroup_elements(T)}
            )
            self._b[w] = hit
        return hit

    def basis_vector(self, w, side):
        _check_side(side)
        return self.b_prime(w) if side == "left" else self.b(w)

    def descent_set(self, w, side):
        return self.system.left_descents(w) if side == "left" else self.system.right_descents(w)

    def descent_basis(self, side, N):
        """One slice per spherical ``T``: the basis vectors indexed by ``w`` with descent set ``T``."""
        _check_side(side)
        slices = {T: [] for T in self.system.spherical_poset()}
        for w in self.system.ball(N):
            slices[self.descent_set(w, side)].append((w, self.basis_vector(w, side)))
        return [DescentBasisSlice(T, side, tuple(v)) for T, v in slices.items()]

    def change_of_basis(self, side, N):
        """Rows: the basis vectors ``b'_w`` (or ``b_w``) in ``e``-coordinates over the ball."""
        ball = self.system.ball(N)
        rows = []
        for w in ball:
            v = self.basis_vector(w, side)
            row = [0] * len(ball)
            for u, c in v.coeffs.items():
                row[ball.index[u]] = c
            rows.append(row)
        return ball, rows

    def decompose(self, x, side):
        """Coefficients of ``x`` over the descent basis, by top-down triangular solve."""
        _check_side(side)
        if x.max_length() > x.trust_radius:
            raise OutOfTrustRadius(
                f"support reaches length {x.max_length()} beyond trust radius {x.trust_radius}"
            )
        rest = dict(x.coeffs)
        out = {}
        while rest:
            w = max(rest, key=shortlex_key)
            c = rest[w]
            out[w] = c
            for u, a in self.basis_vector(w, side).coeffs.items():
                v = rest.get(u, 0) - c * a
                if v:
                    rest[u] = v
                else:
                    rest.pop(u, None)
        return out

    def recompose(self, coeffs, side):
        out = self.zero()
        for w, c in coeffs.items():
            out = out + self.basis_vector(w, side) * c
        return out

    # -- invariants and coinvariants ---------------------------------------------

    def is_invariant(self, x, T):
        """Whether ``s x = x`` for all ``s`` in ``T``, cross-checked against the b'-decomposition."""
        W = self.system
        T = W.subset(T)
        if x.max_length() > x.trust_radius:
            raise OutOfTrustRadius("element not exact on its support")
        direct = all(multiply(self.gen(s), x) == x for s in T)
        via_basis = all(T <= W.left_descents(w) for w in self.decompose(x, "left"))
        if direct != via_basis:
            raise VerificationFailure("invariance test and decomposition disagree", witness=x)
        return direct

    def project_coinvariants(self, x, U):
        """Image of ``x`` in ``A_U = A / A I_U``, as coordinates over ``Y_U``.

        ``A_U`` is the permutation module on ``W / W_U``; ``e_w`` maps to the
        shortest element of ``w W_U``, which makes the projection exact even
        when ``W_U`` is infinite.
        """
        W = self.system
        U = W.subset(U)
        out = {}
        for w, c in x.coeffs.items():
            r = W.min_coset_rep(w, U)
            out[r] = out.get(r, 0) + c
        return {w: c for w, c in out.items() if c}

    def coinvariant_basis_rank(self, U, N):
        """Rank of the projected ``{b_w : In(w) ⊆ S - U}`` in ``A_U`` over the ball.

        Returns ``(rank, expected)`` with ``expected = |ball ∩ Y_U|``.  The
        projected matrix is unitriangular, so full rank also means unimodular.
        """
        W = self.system
        U = W.subset(U)
        reps = [w for w in W.ball(N) if not (W.right_descents(w) & U)]
        index = {w: i for i, w in enumerate(reps)}
        rows = []
        for i, w in enumerate(reps):
            proj = self.project_coinvariants(self.b(w), U)
            row = [0] * len(reps)
            for u, c in proj.items():
                row[index[u]] = c
            if row[i] != 1 or any(row[j] for j in range(i + 1, len(reps))):
                raise VerificationFailure("projected b-basis is not unitriangular", witness=w)
            rows.append(row)
        return linalg.rank(rows, len(reps)), len(reps)

    # -- filtration and graded quotients ----------------------------------------

    def filtration(self, p, side, N):
        _check_side(side)
        F, E = [], []
        for w in self.system.ball(N):
            (F if len(self.descent_set(w, side)) >= p else E).append(w)
        return FiltrationSlice(p, side, N, tuple(F), tuple(E))

    def quotient_action(self, T, s, side, N):
        """Action of generator ``s`` on ``Q_<T>`` (side left, right action) or ``Q'_<T>`` (side right, left action)."""
        _check_side(side)
        W = self.system
        T = self._spherical(T)
        s = W.gen(s)
        basis = tuple(w for w in W.ball(N) if self.descent_set(w, side) == T)
        index = {w: i for i, w in enumerate(basis)}
        mat = [[0] * len(basis) for _ in basis]
        valid = []
        gen = self.gen(s)
        for j, w in enumerate(basis):
            v = self.basis_vector(w, side)
            img = multiply(v, gen) if side == "left" else multiply(gen, v)
            coeffs = self.decompose(img, side)
            ok = True
            for u, c in coeffs.items():
                D = self.descent_set(u, side)
                if not T <= D:
                    raise VerificationFailure("image left the invariant submodule", witness=w)
                if D != T:
                    continue
                if u in index:
                    mat[index[u]][j] = c
                else:
                    ok = False
            valid.append(ok)
        return QuotientAction(T, s, side, basis, tuple(tuple(r) for r in mat), tuple(valid))

    def solomon_check(self):
        """Rational dimensions of ``A^T/A^{>T}`` and ``H^T/H^{>T}`` for finite ``W``.

        Dimensions are computed from the spanning sets ``a_T e_w`` and
        ``e_w h_T`` alone and compared with the descent-class counts.
        """
        W = self.system
        if not W.is_finite():
            raise NotFinite("the Solomon decomposition needs a finite group")
        ball = W.elements()
        n = len(ball)
        poset = list(W.spherical_poset())
        report = {"order": n, "left": {}, "right": {}}

        def span_rows(T, side):
            rows = []
            for w in ball:
                if side == "left":
                    v = multiply(self.symmetrizer(T), self.e(w))
                else:
                    v = multiply(self.e(w), self.alternator(T))
                row = [0] * n
                for u, c in v.coeffs.items():
                    row[ball.index[u]] = c
                rows.append(row)
            return linalg.basis(linalg.mat(rows, n))

        for side in ("left", "right"):
            spans = {T: span_rows(T, side) for T in poset}
            total = 0
            for T in poset:
                bigger = linalg.vstack([spans[T2] for T2 in poset if T2 > T], n)
                dim = spans[T].nrows() - linalg.rank(bigger)
                count = sum(1 for w in ball if self.descent_set(w, side) == T)
                report[side][T] = (dim, count)
                total += dim
            lifts = [self.basis_vector(w, side) for w in ball]
            rows = [[v[u] for u in ball] for v in lifts]
            report[side + "_total"] = total
            report[side + "_lift_rank"] = linalg.rank(rows, n)
        report["ok"] = all(
            report[side + "_total"] == n
            and report[side + "_lift_rank"] == n
            and all(d == c for d, c in report[side].values())
            for side in ("left", "right")
        )
        return report
