"""Coxeter systems: word problem, descent sets, spherical subsets and balls.

Group elements are represented by their canonical reduced word, a tuple of
generator indices that is ShortLex-least among all reduced expressions
(generator order is the input order).  Reduced words are handled with Tits'
elementary operations: by Matsumoto's theorem the reduced expressions of an
element form one orbit under braid moves, so the orbit of a reduced word
gives every reduced word at once and with it both descent sets.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    BadDiagonal,
    BadEntry,
    NonSymmetric,
    NotSpherical,
    ParseError,
    ResourceLimit,
    UnknownGenerator,
)

INF = math.inf
DEFAULT_MAX_ELEMENTS = 200_000

Word = tuple  # tuple[int, ...]


def max_elements_from_env(default=DEFAULT_MAX_ELEMENTS):
    raw = os.environ.get("COXCOH_MAX_ELEMENTS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"COXCOH_MAX_ELEMENTS must be an integer, got {raw!r}")
    if value <= 0:
        raise ParseError("COXCOH_MAX_ELEMENTS must be positive")
    return value


@dataclass(frozen=True)
class CoxeterMatrix:
    generators: tuple
    m: tuple

    def __post_init__(self):
        gens = tuple(str(g) for g in self.generators)
        if len(set(gens)) != len(gens):
            raise BadEntry(f"duplicate generator names in {gens}")
        n = len(gens)
        rows = tuple(tuple(_entry(x) for x in row) for row in self.m)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise BadEntry(f"matrix must be {n}x{n}")
        for i in range(n):
            if rows[i][i] != 1:
                raise BadDiagonal(f"m[{i}][{i}] = {rows[i][i]}, expected 1")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise NonSymmetric(f"m[{i}][{j}] != m[{j}][{i}]")
                if i != j and rows[i][j] < 2:
                    raise BadEntry(f"m[{i}][{j}] = {rows[i][j]} must be >= 2 or infinity")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "m", rows)

    @property
    def rank(self):
        return len(self.generators)

    @classmethod
    def from_json(cls, doc):
        """Build from ``{"generators": [...], "m": [[...]]}`` with infinity written as 0."""
        if isinstance(doc, (str, bytes)):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or "generators" not in doc or "m" not in doc:
            raise ParseError('Coxeter matrix document needs "generators" and "m"')
        m = doc["m"]
        if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
            raise ParseError('"m" must be a list of lists')
        rows = []
        for row in m:
            out = []
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise ParseError(f"matrix entries must be integers, got {x!r}")
                out.append(INF if x == 0 else x)
            rows.append(out)
        return cls(tuple(doc["generators"]), tuple(tuple(r) for r in rows))

    def to_json(self):
        return {
            "generators": list(self.generators),
            "m": [[0 if x == INF else int(x) for x in row] for row in self.m],
        }

    def is_right_angled(self):
        n = self.rank
        return all(self.m[i][j] in (2, INF) for i in range(n) for j in range(n) if i != j)


def _entry(x):
    if x == INF:
        return INF
    if isinstance(x, bool) or not isinstance(x, int):
        if isinstance(x, float) and x.is_integer():
            return int(x)
        raise BadEntry(f"matrix entry {x!r} is not an integer")
    return x


@dataclass(frozen=True)
class DescentData:
    element: Word
    in_right: frozenset
    in_left: frozenset


@dataclass(frozen=True)
class SphericalPoset:
    subsets: tuple  # frozensets, sorted by (size, sorted members)
    order: dict = field(compare=False)
    longest: dict = field(compare=False)

    def __contains__(self, T):
        return frozenset(T) in self.order

    def __iter__(self):
        return iter(self.subsets)

    def __len__(self):
        return len(self.subsets)


@dataclass(frozen=True)
class Ball:
    radius: int
    elements: tuple
    index: dict = field(compare=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, w):
        return w in self.index

    @property
    def stabilized(self):
        return bool(self.elements) and len(self.elements[-1]) < self.radius


def shortlex_key(w):
    return (len(w), w)


class CoxeterSystem:
    """A Coxeter system ``(W, S)`` given by its Coxeter matrix.

    Caches (reduced-word orbits, products) only ever store values that are
    functions of their keys, so concurrent readers see consistent data.
    """

    def __init__(self, matrix, max_elements=None):
        if not isinstance(matrix, CoxeterMatrix):
            matrix = CoxeterMatrix(*matrix)
        self.matrix = matrix
        self.generators = matrix.generators
        self.rank = matrix.rank
        self.m = matrix.m
        self.max_elements = max_elements or max_elements_from_env()
        self._gen_index = {g: i for i, g in enumerate(self.generators)}
        self._orbits = {(): frozenset([()])}
        self._rmul_cache = {}
        self._levels = [[()]]
        self._poset = None
        self._subgroups = {}

    def __repr__(self):
        return f"CoxeterSystem({self.matrix.to_json()})"

    @classmethod
    def from_json(cls, doc, **kw):
        return cls(CoxeterMatrix.from_json(doc), **kw)

    # -- names and subsets -------------------------------------------------

    def gen(self, s):
        if isinstance(s, str):
            try:
                return self._gen_index[s]
            except KeyError:
                raise UnknownGenerator(f"unknown generator {s!r}") from None
        if isinstance(s, int) and not isinstance(s, bool) and 0 <= s < self.rank:
            return s
        raise UnknownGenerator(f"unknown generator {s!r}")

    def subset(self, T):
        if isinstance(T, str):
            T = [x.strip() for x in T.split(",") if x.strip()]
        return frozenset(self.gen(s) for s in T)

    def names(self, w):
        return [self.generators[i] for i in w]

    def subset_names(self, T):
        return [self.generators[i] for i in sorted(T)]

    def format(self, w):
        return "".join(self.generators[i] for i in w) if w else "e"

    @property
    def S(self):
        return frozenset(range(self.rank))

    # -- word problem --------------------------------------------------------

    def _braid_neighbours(self, word):
        n = len(word)
        for i in range(n - 1):
            s, t = word[i], word[i + 1]
            if s == t:
                continue
            m = self.m[s][t]
            if m == INF or i + m > n:
                continue
            ok = True
            for k in range(m):
                if word[i + k] != (s if k % 2 == 0 else t):
                    ok = False
                    break
            if ok:
                swapped = tuple(t if k % 2 == 0 else s for k in range(m))
                yield word[:i] + swapped + word[i + m:]

    def _orbit_from(self, seeds):
        seen = set(seeds)
        stack = list(seen)
        while stack:
            word = stack.pop()
            for nb in self._braid_neighbours(word):
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return frozenset(seen)

    def reduced_words(self, w):
        """All reduced expressions of the element with canonical word ``w``."""
        orbit = self._orbits.get(w)
        if orbit is None:
            w = self.canonicalize(w)
            orbit = self._orbits[w]
        return orbit

    def rmul(self, w, s):
        """Canonical word of ``w * s`` for canonical ``w`` and generator index ``s``."""
        key = (w, s)
        hit = self._rmul_cache.get(key)
        if hit is not None:
            return hit
        orbit = self._orbits[w]
        shorter = [u[:-1] for u in orbit if u[-1] == s] if w else []
        if shorter:
            # every reduced word of ws is obtained this way
            result = min(shorter)
            self._orbits.setdefault(result, frozenset(shorter))
        else:
            new_orbit = self._orbit_from(u + (s,) for u in orbit)
            result = min(new_orbit)
            self._orbits.setdefault(result, new_orbit)
        self._rmul_cache[key] = result
        return result

    def canonicalize(self, word):
        """Canonical reduced word of the product of the letters in ``word``."""
        w = ()
        for letter in word:
            w = self.rmul(w, self.gen(letter))
        return w

    def lmul(self, s, w):
        return self.inverse(self.rmul(self.inverse(w), self.gen(s)))

    def inverse(self, w):
        if w not in self._orbits:
            w = self.canonicalize(w)
        orbit = self._orbits[w]
        rev = frozenset(tuple(reversed(u)) for u in orbit)
        inv = min(rev)
        self._orbits.setdefault(inv, rev)
        return inv

    def multiply(self, u, v):
        w = u
        for s in v:
            w = self.rmul(w, s)
        return w

    def length(self, w):
        return len(w)

    def right_descents(self, w):
        """``In(w)``: generators s with l(ws) < l(w)."""
        if not w:
            return frozenset()
        return frozenset(u[-1] for u in self.reduced_words(w))

    def left_descents(self, w):
        """``In'(w)``: generators s with l(sw) < l(w)."""
        if not w:
            return frozenset()
        return frozenset(u[0] for u in self.reduced_words(w))

    def descents(self, w):
        return DescentData(w, self.right_descents(w), self.left_descents(w))

    # -- finiteness ------------------------------------------------------------

    def is_finite_type(self, T):
        """Whether ``W_T`` is finite, by the classification of Coxeter diagrams."""
        T = self.subset(T)
        for comp in self._components(T):
            if not _finite_component(comp, self.m):
                return False
        return True

    def _components(self, T):
        left = set(T)
        while left:
            start = left.pop()
            comp, stack = {start}, [start]
            while stack:
                a = stack.pop()
                for b in list(left):
                    if self.m[a][b] != 2:
                        left.discard(b)
                        comp.add(b)
                        stack.append(b)
            yield comp

    def subgroup_elements(self, T):
        """All elements of the finite special subgroup ``W_T``, shortlex sorted."""
        T = self.subset(T)
        hit = self._subgroups.get(T)
        if hit is not None:
            return hit
        if not self.is_finite_type(T):
            raise NotSpherical(f"W_T is infinite for T = {self.subset_names(T)}")
        gens = sorted(T)
        level, seen = [()], {()}
        out = [()]
        while level:
            nxt = set()
            for w in level:
                rd = self.right_descents(w)
                for s in gens:
                    if s not in rd:
                        v = self.rmul(w, s)
                        if v not in seen:
                            nxt.add(v)
            level = sorted(nxt)
            seen.update(level)
            out.extend(level)
            if len(out) > self.max_elements:
                raise ResourceLimit(f"W_T exceeds {self.max_elements} elements")
        result = tuple(out)
        self._subgroups[T] = result
        return result

    def longest_element(self, T):
        """The longest element ``w_T`` of a finite ``W_T``."""
        return self.subgroup_elements(T)[-1]

    def order(self, T):
        return len(self.subgroup_elements(T))

    def spherical_poset(self):
        if self._poset is None:
            subsets, order, longest = [], {}, {}
            for k in range(self.rank + 1):
                for combo in itertools.combinations(range(self.rank), k):
                    T = frozenset(combo)
                    if self.is_finite_type(T):
                        subsets.append(T)
                        order[T] = self.order(T)
                        longest[T] = self.longest_element(T)
            self._poset = SphericalPoset(tuple(subsets), order, longest)
        return self._poset

    def is_finite(self):
        return self.is_finite_type(self.S)

    # -- balls -------------------------------------------------------------------

    def sphere(self, k):
        """Elements of length exactly ``k``, shortlex sorted."""
        while len(self._levels) <= k:
            prev = self._levels[-1]
            nxt = set()
            for w in prev:
                rd = self.right_descents(w)
                for s in range(self.rank):
                    if s not in rd:
                        nxt.add(self.rmul(w, s))
            total = sum(len(lv) for lv in self._levels) + len(nxt)
            if total > self.max_elements:
                raise ResourceLimit(
                    f"ball of radius {len(self._levels)} exceeds {self.max_elements} elements"
                )
            self._levels.append(sorted(nxt))
        return self._levels[k]

    def ball(self, N):
        if N < 0:
            raise ValueError("radius must be nonnegative")
        elements = []
        for k in range(N + 1):
            level = self.sphere(k)
            if not level:
                break
            elements.extend(level)
        elements = tuple(elements)
        return Ball(N, elements, {w: i for i, w in enumerate(elements)})

    def elements(self):
        """Every element of a finite W."""
        if not self.is_finite():
            raise NotSpherical("W is infinite")
        return self.ball(len(self.longest_element(self.S)))

    def reduced_reps(self, U, side, N):
        """Ball elements with no descent in ``U`` on the given side (left: X_U, right: Y_U)."""
        U = self.subset(U)
        if side == "left":
            return [w for w in self.ball(N) if not (U & self.left_descents(w))]
        if side == "right":
            return [w for w in self.ball(N) if not (U & self.right_descents(w))]
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def min_coset_rep(self, w, T):
        """Shortest element of the coset ``w W_T`` (T may be non-spherical)."""
        T = frozenset(T)
        while True:
            hit = T & self.right_descents(w)
            if not hit:
                return w
            w = self.rmul(w, min(hit))

    def min_left_coset_rep(self, w, T):
        """Shortest element of the coset ``W_T w``."""
        T = frozenset(T)
        while True:
            hit = T & self.left_descents(w)
            if not hit:
                return w
            w = self.lmul(min(hit), w)

    def conjugacy_classes(self):
        """Generator classes under conjugacy: connected components of odd-labelled edges."""
        parent = list(range(self.rank))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                m = self.m[i][j]
                if m != INF and m % 2 == 1:
                    parent[find(i)] = find(j)
        classes = {}
        for i in range(self.rank):
            classes.setdefault(find(i), []).append(i)
        return sorted((frozenset(c) for c in classes.values()), key=min)


def _finite_component(nodes, m):
    nodes = sorted(nodes)
    n = len(nodes)
    if n == 1:
        return True
    edges = {}
    for a, b in itertools.combinations(nodes, 2):
        if m[a][b] != 2:
            edges[(a, b)] = m[a][b]
    if any(v == INF for v in edges.values()):
        return False
    if n == 2:
        return True
    if len(edges) != n - 1:
        return False  # contains a cycle
    if any(v > 5 for v in edges.values()):
        return False
    adj = {a: [] for a in nodes}
    for (a, b), v in edges.items():
        adj[a].append((b, v))
        adj[b].append((a, v))
    degrees = {a: len(adj[a]) for a in nodes}
    branch = [a for a in nodes if degrees[a] >= 3]
    if branch:
        if len(branch) > 1 or degrees[branch[0]] != 3:
            return False
        if any(v != 3 for v in edges.values()):
            return False
        legs = []
        for nb, _ in adj[branch[0]]:
            length, prev, cur = 1, branch[0], nb
            while degrees[cur] == 2:
                nxt = [x for x, _ in adj[cur] if x != prev][0]
                prev, cur = cur, nxt
                length += 1
            legs.append(length)
        legs.sort()
        # D_n: (1, 1, k); E6, E7, E8: (1, 2, 2), (1, 2, 3), (1, 2, 4)
        return legs[0] == 1 and (legs[1] == 1 or (legs[1] == 2 and legs[2] <= 4))
    # a path: read its labels in order
    end = next(a for a in nodes if degrees[a] == 1)
    labels, prev, cur = [], None, end
    while True:
        nxt = [(x, v) for x, v in adj[cur] if x != prev]
        if not nxt:
            break
        x, v = nxt[0]
        labels.append(v)
        prev, cur = cur, x
    special = [i for i, v in enumerate(labels) if v != 3]
    if not special:
        return True  # A_n
    if len(special) > 1:
        return False
    i, v = special[0], labels[special[0]]
    at_end = i in (0, len(labels) - 1)
    if v == 4:
        return at_end or (n == 4 and i == 1)  # B_n or F4
    return at_end and n <= 4  # H3, H4


def coxeter_matrix(generators: Sequence[str], pairs=None, default=2) -> CoxeterMatrix:
    """Convenience constructor: ``pairs`` maps (s, t) name pairs to m_st."""
    gens = tuple(generators)
    idx = {g: i for i, g in enumerate(gens)}
    m = [[1 if i == j else default for j in range(len(gens))] for i in range(len(gens))]
    for (a, b), v in (pairs or {}).items():
        m[idx[a]][idx[b]] = m[idx[b]][idx[a]] = v
    return CoxeterMatrix(gens, tuple(tuple(r) for r in m))


def subsets_of(items: Iterable):
    items = sorted(items)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)
