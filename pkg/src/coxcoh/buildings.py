"""Right-angled buildings of finite thickness, modelled as graph products.

For a right-angled Coxeter system and thicknesses ``q_s``, the chambers are
the elements of the graph product of the cyclic groups ``Z/(q_s + 1)``
(generators commute exactly when ``m_st = 2``).  A chamber is stored as its
normal form: a tuple of syllables ``(s, k)`` with ``1 <= k <= q_s`` whose
type word is the ShortLex-least reduced word of its image in W.  Two
chambers are ``s``-equivalent when they differ by a right factor from the
``s``-th cyclic group, and ``δ(φ, ψ)`` is the type of ``φ^{-1} ψ``.

Functions on chambers are dicts ``{chamber: int}``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .complexes import MirroredComplex
from .coxeter import CoxeterSystem, coxeter_matrix, INF
from .errors import (
    NonSphericalMirrorIntersection,
    NotRightAngledSpherical,
    NotSpherical,
    OutOfTrustRadius,
    ParseError,
    ResourceLimit,
    ValidationError,
)
from .homology import ChainComplexZ, HomologySummary, cohomology

MAX_THICKNESS = 4


def _check_right_angled(system):
    if not system.matrix.is_right_angled():
        raise ValidationError("buildings are modelled for right-angled Coxeter systems only")


def _thickness(system, q):
    if isinstance(q, str) and "=" not in q:
        try:
            q = int(q)
        except ValueError:
            raise ParseError(f"thickness must be an integer or name=integer list, got {q!r}") from None
    if isinstance(q, str):
        parsed = {}
        for part in q.split(","):
            if part.strip():
                name, _, value = part.partition("=")
                try:
                    parsed[name.strip()] = int(value)
                except ValueError:
                    raise ParseError(f"thickness must be name=integer, got {part!r}") from None
        q = parsed
    if isinstance(q, dict):
        values = [None] * system.rank
        for name, v in q.items():
            values[system.gen(name)] = int(v)
        if None in values:
            missing = [system.generators[i] for i, v in enumerate(values) if v is None]
            raise ValidationError(f"no thickness given for {missing}")
    elif isinstance(q, int):
        values = [q] * system.rank
    else:
        values = [int(v) for v in q]
    if len(values) != system.rank:
        raise ValidationError(f"expected {system.rank} thickness values")
    for s, v in enumerate(values):
        if v < 1:
            raise ValidationError(f"thickness of {system.generators[s]} must be at least 1")
    return tuple(values)


def chamber_key(phi):
    return (len(phi), phi)


class ChamberSystem:
    """The chambers of a right-angled building within syllable length ``radius``."""

    def __init__(self, system, thickness, radius, max_thickness=MAX_THICKNESS):
        _check_right_angled(system)
        self.system = system
        self.q = _thickness(system, thickness)
        if max(self.q, default=0) > max_thickness:
            raise ResourceLimit(f"thickness above {max_thickness}; raise max_thickness to allow it")
        if radius < 0:
            raise ValidationError("radius must be nonnegative")
        self.radius = radius
        self.chambers = self._enumerate(radius)
        self.index = {phi: i for i, phi in enumerate(self.chambers)}
        self._residues = {}
        self._foldings = {}

    def __repr__(self):
        q = ", ".join(f"{g}={v}" for g, v in zip(self.system.generators, self.q))
        return f"ChamberSystem({q}, radius={self.radius}, chambers={len(self.chambers)})"

    def __len__(self):
        return len(self.chambers)

    def __contains__(self, phi):
        return phi in self.index

    @property
    def is_spherical(self):
        return self.system.is_finite()

    # -- normal forms ------------------------------------------------------------------

    def types(self, phi):
        return tuple(s for s, _ in phi)

    def project(self, phi):
        """The image ``π(φ)`` of a chamber in W (the folding centred at the identity chamber)."""
        return self.types(phi)

    def _normalize(self, syllables):
        """Reorder syllables with a reduced type word into the canonical order."""
        values = {}
        for s, k in syllables:
            values.setdefault(s, []).append(k)
        canonical = self.system.canonicalize(tuple(s for s, _ in syllables))
        pos = {s: 0 for s in values}
        out = []
        for s in canonical:
            out.append((s, values[s][pos[s]]))
            pos[s] += 1
        return tuple(out)

    def mul_syllable(self, phi, s, k):
        k %= self.q[s] + 1
        if k == 0:
            return phi
        W = self.system
        types = self.types(phi)
        if s in W.right_descents(types):
            i = max(j for j, t in enumerate(types) if t == s)
            v = (phi[i][1] + k) % (self.q[s] + 1)
            rest = list(phi)
            if v:
                rest[i] = (s, v)
            else:
                del rest[i]
            return self._normalize(rest)
        return self._normalize(list(phi) + [(s, k)])

    def multiply(self, phi, psi):
        for s, k in psi:
            phi = self.mul_syllable(phi, s, k)
        return phi

    def inverse(self, phi):
        return self._normalize([(s, (self.q[s] + 1 - k)) for s, k in reversed(phi)])

    def delta(self, phi, psi):
        """W-distance ``δ(φ, ψ)``."""
        return self.types(self.multiply(self.inverse(phi), psi))

    def folding(self, base=()):
        """``π(φ) = δ(base, φ)``."""
        return lambda phi: self.delta(base, phi)

    def _enumerate(self, N):
        W = self.system
        layer = [()]
        out = [()]
        for _ in range(N):
            nxt = set()
            for phi in layer:
                D = W.right_descents(self.types(phi))
                for s in range(W.rank):
                    if s in D:
                        continue
                    for k in range(1, self.q[s] + 1):
                        nxt.add(self._normalize(list(phi) + [(s, k)]))
            layer = sorted(nxt, key=chamber_key)
            out.extend(layer)
            if len(out) > W.max_elements:
                raise ResourceLimit(f"more than {W.max_elements} chambers")
            if not layer:
                break
        return tuple(sorted(out, key=chamber_key))

    # -- residues -----------------------------------------------------------------------

    def equivalence_class(self, phi, s):
        return [self.mul_syllable(phi, s, k) for k in range(self.q[s] + 1)]

    def residue(self, phi, T):
        """``Res(φ, T)`` for spherical ``T``, as a sorted tuple of chambers (possibly beyond the ball)."""
        W = self.system
        T = W.subset(T)
        if not W.is_finite_type(T):
            raise NotSpherical(f"{W.subset_names(T)} is not spherical; its residues are infinite")
        key = (phi, T)
        hit = self._residues.get(key)
        if hit is None:
            gens = sorted(T)
            out = set()
            for ks in itertools.product(*[range(self.q[s] + 1) for s in gens]):
                psi = phi
                for s, k in zip(gens, ks):
                    psi = self.mul_syllable(psi, s, k)
                out.add(psi)
            hit = tuple(sorted(out, key=chamber_key))
            self._residues[key] = hit
        return hit

    def residue_in_ball(self, phi, T):
        return all(len(psi) <= self.radius for psi in self.residue(phi, T))

    def residues(self, T):
        """The ``T``-residues lying entirely inside the ball, each as a sorted tuple."""
        seen = {}
        for phi in self.chambers:
            R = self.residue(phi, T)
            if R[0] not in seen and all(len(psi) <= self.radius for psi in R):
                seen[R[0]] = R
        return [seen[k] for k in sorted(seen, key=chamber_key)]

    # -- per-residue foldings -------------------------------------------------------------

    def greedy_residue(self, phi):
        """``R_φ = Res(φ, In(π(φ)))`` and its type."""
        U = self.system.right_descents(self.project(phi))
        return self.residue(phi, U), U

    def longest_part(self, R):
        """``L_R``: chambers of ``R`` whose image under ``π`` is longest."""
        top = max(len(psi) for psi in R)
        return tuple(psi for psi in R if len(psi) == top)

    def residue_base(self, R, choice="least"):
        """Base chamber of the folding ``π_{L_R}``: least in normal-form order, or seeded random."""
        key = (R, choice)
        hit = self._foldings.get(key)
        if hit is None:
            L = self.longest_part(R)
            if choice == "least":
                hit = L[0]
            else:
                rng = random.Random(f"{choice}:{R}")
                hit = rng.choice(L)
            self._foldings[key] = hit
        return hit

    def descent_label(self, phi, choice="least"):
        """``Out_U(π_{L_R}(φ))`` for ``R = R_φ`` of type ``U``: the set ``T`` with ``f_φ ∈ B̂^T``."""
        R, U = self.greedy_residue(phi)
        base = self.residue_base(R, choice)
        local = self.delta(base, phi)
        return U - self.system.right_descents(local)

    # -- functions ------------------------------------------------------------------------

    def indicator(self, chambers):
        return BuildingFunction({psi: 1 for psi in chambers}, self.radius)

    def g_phi(self, phi, base=()):
        """Characteristic function of ``Res(φ, Out(π(φ)))`` (spherical buildings)."""
        if not self.is_spherical:
            raise NotSpherical("g_phi is defined for spherical buildings")
        W = self.system
        out = W.S - W.right_descents(self.delta(base, phi))
        return self.indicator(self.residue(phi, out))

    def f_phi(self, phi, choice="least"):
        """Characteristic function of ``Res(φ, Out_U(π_{L_R}(φ)))``; supported in ``R_φ``."""
        if len(phi) > self.radius:
            raise OutOfTrustRadius("chamber outside the ball")
        D = self.descent_label(phi, choice)
        return self.indicator(self.residue(phi, D))


@dataclass(frozen=True)
class BuildingFunction:
    values: dict
    trust_radius: float = INF

    @property
    def support(self):
        return frozenset(k for k, v in self.values.items() if v)

    def __call__(self, phi):
        return self.values.get(phi, 0)


def spherical_building(thickness, generators=None):
    """``Φ_1 × ... × Φ_n`` with ``|Φ_i| = q_i + 1``: the building of type ``(Z/2)^n``."""
    if isinstance(thickness, CoxeterSystem):
        raise TypeError("pass thickness values; use building_for(system, q) for a given system")
    if isinstance(thickness, dict):
        generators = tuple(thickness)
        thickness = [thickness[g] for g in generators]
    thickness = list(thickness)
    if generators is None:
        generators = tuple("stuvwxyz"[: len(thickness)]) if len(thickness) <= 8 else tuple(
            f"s{i}" for i in range(len(thickness))
        )
    system = CoxeterSystem(coxeter_matrix(generators))
    return ChamberSystem(system, thickness, len(generators))


def building_for(system, thickness, radius=None):
    """The building of a right-angled system; spherical systems need every ``m_st = 2``."""
    if radius is None:
        if not system.is_finite():
            raise ValidationError("an infinite building needs a radius")
        if any(system.m[i][j] != 2 for i in range(system.rank) for j in range(system.rank) if i != j):
            raise NotRightAngledSpherical("spherical buildings here need every m_st = 2")
        radius = system.rank
    return ChamberSystem(system, thickness, radius)


def graph_product_ball(system, thickness, N):
    return ChamberSystem(system, thickness, N)


# -- bases ------------------------------------------------------------------------------


@dataclass
class BasisReport:
    T: frozenset
    kind: str  # "g" (one folding, spherical) or "f" (per-residue foldings)
    functions: list  # (chamber, BuildingFunction)
    standard_rank: int  # number of T-residues in the ball
    rank: int
    spanning: bool
    constant_on_residues: bool
    determinant: int | None
    unitriangular: bool | None
    partition: dict = field(default_factory=dict)  # U -> (rank A^U, Σ_{T' ⊇ U} |B̂^{T'}|)

    @property
    def independent(self):
        return self.rank == len(self.functions)

    @property
    def ok(self):
        good = self.independent and self.spanning and self.constant_on_residues
        good = good and len(self.functions) == self.standard_rank
        if self.determinant is not None:
            good = good and abs(self.determinant) == 1
        if self.unitriangular is not None:
            good = good and self.unitriangular
        return good and all(a == b for a, b in self.partition.values())

    def to_dict(self, Phi):
        W = Phi.system
        return {
            "T": W.subset_names(self.T),
            "kind": self.kind,
            "size": len(self.functions),
            "standard_rank": self.standard_rank,
            "rank": self.rank,
            "independent": self.independent,
            "spanning": self.spanning,
            "determinant": self.determinant,
            "unitriangular": self.unitriangular,
            "partition": {
                ",".join(W.subset_names(U)) or "{}": list(v) for U, v in self.partition.items()
            },
            "ok": self.ok,
        }


def _coefficients(Phi, functions, residues):
    """Coefficients of functions constant on the given residues over their indicators."""
    rows = []
    constant = True
    for _, f in functions:
        row = []
        for R in residues:
            vals = {f(psi) for psi in R}
            if len(vals) > 1:
                constant = False
            row.append(f(R[0]))
        rows.append(row)
    return rows, constant


def basis_BT(Phi, T, kind=None, base=(), choice="least"):
    """``B^T`` with its verification against the standard basis of ``A^T`` in the ball.

    ``kind='g'`` uses ``g_φ`` for a spherical building with folding based at
    ``base``; ``kind='f'`` (default for infinite buildings) uses ``f_φ`` with
    per-residue foldings chosen by ``choice`` (``'least'`` or a seed).
    """
    W = Phi.system
    T = W.subset(T)
    if not W.is_finite_type(T):
        return BasisReport(T, kind or "f", [], 0, 0, True, True, None, None)
    if kind is None:
        kind = "g" if Phi.is_spherical else "f"
    if kind == "g":
        functions = []
        for phi in Phi.chambers:
            out = W.S - W.right_descents(Phi.delta(base, phi))
            if T <= out:
                functions.append((phi, Phi.g_phi(phi, base)))
    else:
        functions = [
            (phi, Phi.f_phi(phi, choice)) for phi in Phi.chambers if T <= Phi.descent_label(phi, choice)
        ]
    residues = Phi.residues(T)
    for _, f in functions:
        if f.support - set(Phi.chambers):
            raise OutOfTrustRadius("basis function leaves the ball")
    rows, constant = _coefficients(Phi, functions, residues)
    n = len(residues)
    M = linalg.mat(rows, n) if rows else linalg.empty(n)
    rank = linalg.rank(M)
    std = linalg.fmpz_mat(n, n, [int(i == j) for i in range(n) for j in range(n)])
    spanning = rank == n and linalg.rank(linalg.vstack([M, std], n)) == rank if n else True
    determinant = None
    unitriangular = None
    if len(functions) == n and n:
        determinant = int(M.det())
    if kind == "g" and functions:
        # order by l(π(φ)); residue i is the one with representative functions[i][0]
        order = sorted(range(len(functions)), key=lambda i: (len(Phi.delta(base, functions[i][0])), i))
        rep_col = {}
        for j, R in enumerate(residues):
            for phi in R:
                rep_col[phi] = j
        cols = [rep_col[functions[i][0]] for i in order]
        P = [[rows[order[a]][cols[b]] for b in range(len(cols))] for a in range(len(cols))]
        unitriangular = len(set(cols)) == len(cols) == n and all(
            P[a][b] == (1 if a == b else P[a][b]) and (b >= a or P[a][b] == 0)
            for a in range(n)
            for b in range(n)
        )
    partition = {}
    if kind == "f":
        labels = [Phi.descent_label(phi, choice) for phi in Phi.chambers]
        for U in W.spherical_poset():
            if not T <= U:
                continue
            partition[U] = (len(Phi.residues(U)), sum(1 for D in labels if U <= D))
    return BasisReport(T, kind, functions, n, rank, spanning, constant, determinant, unitriangular, partition)


# -- checks of the axioms and of the residue facts ------------------------------------------


def gallery_check(Phi, samples=200, seed=0):
    """Galleries realize δ: a reduced-word gallery exists, and no shorter type reaches the target."""
    W = Phi.system
    rng = random.Random(seed)
    failures = []
    chambers = Phi.chambers
    for _ in range(samples):
        phi, psi = rng.choice(chambers), rng.choice(chambers)
        w = Phi.delta(phi, psi)
        words = sorted(W.reduced_words(w))
        word = rng.choice(words)
        # constructive gallery of type word
        step = Phi._normalize(list(Phi.multiply(Phi.inverse(phi), psi)))
        values = {}
        for s, k in step:
            values.setdefault(s, []).append(k)
        cur, used = phi, {s: 0 for s in values}
        for s in word:
            k = values[s][used[s]]
            used[s] += 1
            nxt = Phi.mul_syllable(cur, s, k)
            if nxt == cur or Phi.delta(cur, nxt) != (s,):
                failures.append(("non-adjacent step", phi, psi))
                break
            cur = nxt
        if cur != psi:
            failures.append(("gallery misses target", phi, psi))
        if Phi.delta(psi, phi) != W.inverse(w):
            failures.append(("delta not inverse-symmetric", phi, psi))
        if len(w) > 0:
            short = [rng.randrange(W.rank) for _ in range(rng.randrange(len(w)))]
            reach = {phi}
            for s in short:
                reach = {x for y in reach for x in Phi.equivalence_class(y, s) if x != y}
            if psi in reach:
                failures.append(("shorter gallery reaches target", phi, psi))
    return {"samples": samples, "failures": failures, "ok": not failures}


def residue_intersection_check(Phi, base=()):
    """For every residue ``R`` and ``T ⊆ type(R)``, each ``T``-residue meets ``L_R`` in a ``T``-residue of ``L_R``."""
    W = Phi.system
    failures = 0
    checked = 0
    for U in W.spherical_poset():
        for R in Phi.residues(U):
            top = max(len(Phi.delta(base, psi)) for psi in R)
            L = {psi for psi in R if len(Phi.delta(base, psi)) == top}
            for T in W.spherical_poset():
                if not T <= U:
                    continue
                for phi in L:
                    Q = set(Phi.residue(phi, T)) & L
                    # T-connected component of phi inside L
                    comp, stack = {phi}, [phi]
                    while stack:
                        x = stack.pop()
                        for s in T:
                            for y in Phi.equivalence_class(x, s):
                                if y in L and y not in comp:
                                    comp.add(y)
                                    stack.append(y)
                    checked += 1
                    if Q != comp:
                        failures += 1
    return {"checked": checked, "failures": failures, "ok": failures == 0}


# -- geometric realization ---------------------------------------------------------------------


@dataclass
class Realization:
    cells: tuple  # (least chamber of the residue, cell of X)
    chains: ChainComplexZ
    lhs: HomologySummary
    rhs: HomologySummary
    slice_ranks: dict  # T -> number of chambers with descent label T
    cell_partition: list  # per cell of X: (rank A^{S(c)}, Σ_{T ⊇ S(c)} slice rank)

    @property
    def ok(self):
        return self.lhs == self.rhs and all(a == b for _, a, b in self.cell_partition)

    def to_dict(self, Phi):
        W = Phi.system
        return {
            "cells": len(self.cells),
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs.to_dict(),
            "lhs_text": str(self.lhs),
            "slice_ranks": {",".join(W.subset_names(T)) or "{}": n for T, n in self.slice_ranks.items()},
            "cell_partition": [list(x) for x in self.cell_partition],
            "ok": self.ok,
        }


def realize(Phi, X: MirroredComplex, choice="least"):
    """Compactly supported cochains of ``U(Φ, X)`` over the ball, against the slice decomposition.

    Cells are pairs (``S(c)``-residue inside the ball, ``c``); this set is
    closed under cofaces, and its cochains are ``⊕_c A^{S(c)}`` restricted
    to the ball, so both sides are compared exactly.
    """
    from .equivariant import relative_summary

    W = Phi.system
    if tuple(X.generators) != tuple(W.generators):
        raise ValidationError("complex mirrors do not match the generators")
    for c in range(X.n_cells):
        if not W.is_finite_type(X.S(c)):
            raise NonSphericalMirrorIntersection(f"cell {c} lies in a non-spherical mirror intersection")
    cells = []
    for c in range(X.n_cells):
        for R in Phi.residues(X.S(c)):
            cells.append((R[0], c))
    top = X.dimension
    bases = [[] for _ in range(top + 1)]
    for i, (_, c) in enumerate(cells):
        bases[X.dims[c]].append(i)
    position = {}
    for b in bases:
        for j, i in enumerate(b):
            position[cells[i]] = j
    d = [None]
    for deg in range(1, top + 1):
        mat = np.zeros((len(bases[deg - 1]), len(bases[deg])), dtype=np.int64)
        for j, i in enumerate(bases[deg]):
            phi, c = cells[i]
            for f, k in X.faces[c].items():
                key = (Phi.residue(phi, X.S(f))[0], f)
                row = position.get(key)
                if row is not None:
                    mat[row, j] += k
        d.append(mat)
    chains = ChainComplexZ([len(b) for b in bases], d)
    lhs = cohomology(chains)
    labels = {}
    for phi in Phi.chambers:
        D = Phi.descent_label(phi, choice)
        labels[D] = labels.get(D, 0) + 1
    slice_ranks = {T: labels.get(T, 0) for T in W.spherical_poset()}
    rhs = HomologySummary.zero()
    for T, n in slice_ranks.items():
        if n:
            rhs = rhs + relative_summary(X, T, "cohomology").scaled(n)
    partition = []
    for c in range(X.n_cells):
        U = X.S(c)
        partition.append((c, len(Phi.residues(U)), sum(n for T, n in slice_ranks.items() if U <= T)))
    return Realization(tuple(cells), chains, lhs, rhs, slice_ranks, partition)
