"""The Hecke algebra A_q of a Coxeter system over the rationals.

Same basis ``{e_w}`` as the group algebra, with

    e_w e_w' = e_ww'                 when l(ww') = l(w) + l(w')
    e_s e_s  = (q_s - 1) e_s + q_s

Parameters are positive rationals, one per generator, equal on conjugate
generators.  At ``q = 1`` everything specializes to ``QW``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .coxeter import CoxeterSystem, shortlex_key
from .errors import NotSpherical, ParseError, ValidationError, ZeroDenominator

INF = math.inf


def hecke_parameters(system, q):
    """Normalize ``q`` (a number, a sequence, or a ``{generator: value}`` map) to a tuple of Fractions."""
    if isinstance(q, str) and "=" not in q:
        try:
            q = Fraction(q.strip())
        except ValueError:
            raise ParseError(f"parameter is not a rational number: {q!r}") from None
    if isinstance(q, str):
        parsed = {}
        for part in q.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ValidationError(f"expected name=value in {part!r}")
            name, value = part.split("=", 1)
            parsed[name.strip()] = value.strip()
        q = parsed
    if isinstance(q, dict):
        values = [None] * system.rank
        for name, value in q.items():
            try:
                values[system.gen(name)] = Fraction(value)
            except ValueError:
                raise ParseError(f"parameter for {name} is not a rational number: {value!r}") from None
        missing = [system.generators[i] for i, v in enumerate(values) if v is None]
        if missing:
            # conjugate generators inherit a given value
            for cls in system.conjugacy_classes():
                given = {values[i] for i in cls if values[i] is not None}
                if len(given) == 1:
                    (v,) = given
                    for i in cls:
                        values[i] = v
            missing = [system.generators[i] for i, v in enumerate(values) if v is None]
            if missing:
                raise ValidationError(f"no parameter given for {missing}")
    elif isinstance(q, (int, float, Fraction)):
        values = [Fraction(q)] * system.rank
    else:
        values = [Fraction(v) for v in q]
        if len(values) != system.rank:
            raise ValidationError(f"expected {system.rank} parameters, got {len(values)}")
    for s, v in enumerate(values):
        if v <= 0:
            raise ValidationError(f"parameter for {system.generators[s]} must be positive, got {v}")
    for cls in system.conjugacy_classes():
        if len({values[i] for i in cls}) > 1:
            names = system.subset_names(cls)
            raise ValidationError(f"conjugate generators {names} need equal parameters")
    return tuple(values)


class HeckeElement:
    __slots__ = ("algebra", "coeffs", "trust_radius")

    def __init__(self, algebra, coeffs=None, trust_radius=INF):
        self.algebra = algebra
        self.coeffs = {w: Fraction(c) for w, c in (coeffs or {}).items() if c}
        self.trust_radius = trust_radius

    @property
    def system(self):
        return self.algebra.system

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for w in sorted(self.coeffs, key=shortlex_key):
            c = self.coeffs[w]
            name = self.system.format(w)
            terms.append(f"({c})*{name}" if c != 1 else name)
        return " + ".join(terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, w):
        return self.coeffs.get(w, Fraction(0))

    def __iter__(self):
        return iter(sorted(self.coeffs.items(), key=lambda kv: shortlex_key(kv[0])))

    @property
    def support(self):
        return frozenset(self.coeffs)

    def max_length(self):
        return max((len(w) for w in self.coeffs), default=-1)

    def _combine(self, other, sign):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + sign * c
        return HeckeElement(self.algebra, out, min(self.trust_radius, other.trust_radius))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return hecke_multiply(self, other)
        k = Fraction(other)
        return HeckeElement(self.algebra, {w: c * k for w, c in self.coeffs.items()}, self.trust_radius)

    def __rmul__(self, k):
        return self * k

    def __matmul__(self, other):
        return hecke_multiply(self, other)


def _product_radius(x, y):
    rx, ry = x.trust_radius, y.trust_radius
    if rx == INF and ry == INF:
        return INF
    if rx == INF:
        return ry - max(x.max_length(), 0)
    if ry == INF:
        return rx - max(y.max_length(), 0)
    return -1


def hecke_multiply(x, y):
    """Product in ``A_q``; ``e_u e_v`` is expanded letter by letter from the right end of ``u``."""
    if x.algebra.q != y.algebra.q or x.system is not y.system:
        raise ValidationError("factors belong to different Hecke algebras")
    alg = x.algebra
    out = {}
    for u, a in x.coeffs.items():
        for v, b in y.coeffs.items():
            for w, c in alg.basis_product(u, v).items():
                out[w] = out.get(w, 0) + a * b * c
    return HeckeElement(alg, out, _product_radius(x, y))


@dataclass(frozen=True)
class HeckeSpecials:
    T: frozenset
    q: tuple
    a: HeckeElement
    h: HeckeElement
    poincare: Fraction  # W_T(q)
    poincare_inverse: Fraction  # W_T(q^-1)
    a_idempotent: bool
    h_idempotent: bool
    alpha_of_sum: Fraction  # α(Σ_{w in W_T} e_w), equal to W_T(q)

    @property
    def ok(self):
        return self.a_idempotent and self.h_idempotent and self.alpha_of_sum == self.poincare


class HeckeAlgebra:
    """``A_q`` together with the interface used by the filtered coefficient complexes."""

    exact_integers = False

    def __init__(self, system: CoxeterSystem, q=1):
        self.system = system
        self.q = hecke_parameters(system, q)
        self._lmul = {}

    def __repr__(self):
        qs = ", ".join(f"{g}={v}" for g, v in zip(self.system.generators, self.q))
        return f"HeckeAlgebra({qs})"

    # -- elements ----------------------------------------------------------------

    def e(self, w=()):
        return HeckeElement(self, {self.system.canonicalize(w): 1})

    def gen(self, s):
        return self.e((self.system.gen(s),))

    def zero(self):
        return HeckeElement(self, {})

    def element(self, coeffs, trust_radius=INF):
        W = self.system
        out = {}
        for w, c in coeffs.items():
            w = W.canonicalize(w)
            out[w] = out.get(w, 0) + Fraction(c)
        return HeckeElement(self, out, trust_radius)

    def q_weight(self, word):
        """``q_w`` as the product of ``q_s`` over the letters of ``word``."""
        out = Fraction(1)
        for s in word:
            out *= self.q[self.system.gen(s)]
        return out

    # -- multiplication ----------------------------------------------------------------

    def lmul_gen(self, s, w):
        """``e_s e_w`` as a coefficient dict."""
        key = (s, w)
        hit = self._lmul.get(key)
        if hit is None:
            W = self.system
            sw = W.lmul(s, w)
            if len(sw) > len(w):
                hit = {sw: Fraction(1)}
            else:
                qs = self.q[s]
                hit = {w: qs - 1, sw: qs}
                hit = {v: c for v, c in hit.items() if c}
            self._lmul[key] = hit
        return hit

    def rmul_gen(self, w, s):
        """``e_w e_s`` as a coefficient dict."""
        W = self.system
        ws = W.rmul(w, s)
        if len(ws) > len(w):
            return {ws: Fraction(1)}
        qs = self.q[s]
        return {v: c for v, c in {w: qs - 1, ws: qs}.items() if c}

    def basis_product(self, u, v):
        """``e_u e_v`` as a coefficient dict."""
        out = {v: Fraction(1)}
        for s in reversed(u):
            nxt = {}
            for w, c in out.items():
                for x, k in self.lmul_gen(s, w).items():
                    nxt[x] = nxt.get(x, 0) + c * k
            out = {w: c for w, c in nxt.items() if c}
        return out

    def invariance_scalar(self, s):
        return self.q[s]

    def weight(self, word):
        return self.q_weight(word)

    # -- special elements ----------------------------------------------------------------

    def _spherical(self, T):
        T = self.system.subset(T)
        if not self.system.is_finite_type(T):
            raise NotSpherical(f"{self.system.subset_names(T)} is not spherical")
        return T

    def poincare(self, T, inverse=False):
        T = self._spherical(T)
        total = Fraction(0)
        for w in self.system.subgroup_elements(T):
            qw = self.q_weight(w)
            total += 1 / qw if inverse else qw
        return total

    def symmetrizer(self, T):
        """``a_T = W_T(q)^{-1} Σ e_w``."""
        T = self._spherical(T)
        P = self.poincare(T)
        if P == 0:
            raise ZeroDenominator("W_T(q) vanishes")
        return HeckeElement(self, {w: 1 / P for w in self.system.subgroup_elements(T)})

    def alternator(self, T):
        """``h_T = W_T(q^{-1})^{-1} Σ (-1)^{l(w)} q_w^{-1} e_w``."""
        T = self._spherical(T)
        P = self.poincare(T, inverse=True)
        if P == 0:
            raise ZeroDenominator("W_T(q^-1) vanishes")
        return HeckeElement(
            self,
            {w: Fraction((-1) ** len(w)) / (self.q_weight(w) * P) for w in self.system.subgroup_elements(T)},
        )

    def sym_times(self, T, u):
        return hecke_multiply(self.symmetrizer(T), self.e(u)).coeffs

    def times_alt(self, u, T):
        return hecke_multiply(self.e(u), self.alternator(T)).coeffs

    def alpha(self, x):
        """The character ``e_w -> q_w`` (on elements supported in a special subgroup)."""
        return sum((c * self.q_weight(w) for w, c in x.coeffs.items()), Fraction(0))

    def beta(self, x):
        return sum((c * (-1) ** len(w) for w, c in x.coeffs.items()), Fraction(0))

    def is_invariant(self, x, T):
        """Whether ``e_s x = q_s x`` for every ``s`` in ``T``."""
        T = self.system.subset(T)
        return all(hecke_multiply(self.gen(s), x) == x * self.q[s] for s in T)

    # -- deformed descent bases -------------------------------------------------------------

    def b_prime(self, w):
        """``(Σ_{v in W_D} e_v) e_w`` with ``D = In'(w)`` (``a_D e_w`` up to the scalar ``W_D(q)``)."""
        D = self.system.left_descents(w)
        return hecke_multiply(self.symmetrizer(D), self.e(w)) * self.poincare(D)

    def b(self, w):
        """``e_w (Σ_{v in W_D} (-1)^{l(v)} q_v^{-1} e_v)`` with ``D = In(w)``."""
        D = self.system.right_descents(w)
        return hecke_multiply(self.e(w), self.alternator(D)) * self.poincare(D, inverse=True)

    def triangularity_check(self, N):
        """Both deformed descent bases are triangular over ``{e_w}`` with invertible diagonal.

        For each ``w`` in the ball the basis vector is supported on the coset
        ``W_D w`` (resp. ``w W_D``), has all other terms strictly shorter than
        ``w``, and a nonzero coefficient at ``w``.
        """
        W = self.system
        report = {}
        for side, vec, coset in (
            ("left", self.b_prime, lambda w, D: {W.multiply(v, W.min_left_coset_rep(w, D)) for v in W.subgroup_elements(D)}),
            ("right", self.b, lambda w, D: {W.multiply(W.min_coset_rep(w, D), v) for v in W.subgroup_elements(D)}),
        ):
            ball = W.ball(N)
            diagonal = []
            failures = []
            for w in ball:
                D = W.left_descents(w) if side == "left" else W.right_descents(w)
                x = vec(w)
                top = x[w]
                if top == 0 or not x.support <= coset(w, D):
                    failures.append(W.format(w))
                elif any(len(u) >= len(w) for u in x.support if u != w):
                    failures.append(W.format(w))
                diagonal.append(top)
            det = Fraction(1)
            for d in diagonal:
                det *= d
            report[side] = {"size": len(ball), "determinant": det, "failures": failures}
        report["ok"] = all(not report[s]["failures"] and report[s]["determinant"] != 0 for s in ("left", "right"))
        return report


def q_weight(system, q, word):
    return HeckeAlgebra(system, q).q_weight(word)


def hecke_specials(system, T, q=1):
    alg = HeckeAlgebra(system, q)
    T = alg._spherical(T)
    a, h = alg.symmetrizer(T), alg.alternator(T)
    numerator = HeckeElement(alg, {w: 1 for w in system.subgroup_elements(T)})
    return HeckeSpecials(
        T,
        alg.q,
        a,
        h,
        alg.poincare(T),
        alg.poincare(T, inverse=True),
        hecke_multiply(a, a) == a,
        hecke_multiply(h, h) == h,
        alg.alpha(numerator),
    )


def braid_shuffle_check(system, q, samples=1000, seed=0, max_length=None):
    """``q_w`` is the same along random sequences of braid moves on reduced words."""
    alg = HeckeAlgebra(system, q)
    rng = random.Random(seed)
    if max_length is None:
        max_length = 6
    pool = [w for w in system.ball(max_length) if w]
    failures = []
    for _ in range(samples):
        w = rng.choice(pool)
        word = list(w)
        for _ in range(rng.randint(1, 8)):
            moves = system._braid_neighbours(tuple(word))
            moves = list(moves)
            if not moves:
                break
            word = list(rng.choice(moves))
        if system.canonicalize(tuple(word)) != w:
            failures.append((system.format(w), system.format(word), "element changed"))
        elif alg.q_weight(word) != alg.q_weight(w):
            failures.append((system.format(w), system.format(word), "weight changed"))
    return {"samples": samples, "failures": failures, "ok": not failures}


def hecke_graded_term(system, p, X, N, q=1, variant="cohomology", traces=None):
    """The graded computation with ``A_q`` coefficients."""
    from .equivariant import graded_term

    return graded_term(system, X, N, p, variant, algebra=HeckeAlgebra(system, q), traces=traces)


def specialization_check(system, X, N, variant="cohomology"):
    """At ``q = 1`` the graded rank tables agree with the group ring's."""
    from .equivariant import graded_term

    rows = []
    for p in range(system.rank + 1):
        hecke = hecke_graded_term(system, p, X, N, 1, variant)
        plain = graded_term(system, X, N, p, variant)
        rows.append({"p": p, "hecke": hecke.lhs, "group_ring": plain.lhs, "equal": hecke.lhs == plain.lhs and hecke.rhs == plain.rhs})
    return {"rows": rows, "ok": all(r["equal"] for r in rows)}
