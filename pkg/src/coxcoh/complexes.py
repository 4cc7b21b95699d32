"""Finite regular CW complexes with mirror structures.

A complex is a list of cells with dimensions and codimension-one incidence
numbers.  A mirror structure assigns to each generator ``s`` a subcomplex
``X_s``; ``S(c)`` is the set of generators whose mirror contains ``c``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import BadIncidence, MirrorNotSubcomplex, NotASubcomplex, ParseError
from .homology import ChainComplexZ


@dataclass(frozen=True)
class MirroredComplex:
    generators: tuple
    dims: tuple
    faces: tuple  # per cell: dict face -> incidence number
    mirrors: tuple  # per generator index: frozenset of cell ids
    labels: tuple = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.dims)
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(
            self, "faces", tuple({int(f): int(k) for f, k in fc.items() if k} for fc in self.faces)
        )
        object.__setattr__(self, "mirrors", tuple(frozenset(m) for m in self.mirrors))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(n)))
        if len(self.faces) != n:
            raise BadIncidence("one face map per cell is required")
        if len(self.mirrors) != len(self.generators):
            raise MirrorNotSubcomplex("one mirror per generator is required")
        for c, fc in enumerate(self.faces):
            for f in fc:
                if not 0 <= f < n:
                    raise BadIncidence(f"cell {c} has unknown face {f}")
                if self.dims[f] != self.dims[c] - 1:
                    raise BadIncidence(f"face {f} of cell {c} is not of codimension one")
        # d∘d = 0 cell by cell
        for c, fc in enumerate(self.faces):
            total = {}
            for f, k in fc.items():
                for g, k2 in self.faces[f].items():
                    total[g] = total.get(g, 0) + k * k2
            bad = [g for g, v in total.items() if v]
            if bad:
                raise BadIncidence(f"boundary of boundary of cell {c} is nonzero at {bad[0]}")
        for s, cells in enumerate(self.mirrors):
            for c in cells:
                if not 0 <= c < n:
                    raise MirrorNotSubcomplex(f"mirror {self.generators[s]} has unknown cell {c}")
                missing = [f for f in self.faces[c] if f not in cells]
                if missing:
                    raise MirrorNotSubcomplex(
                        f"mirror {self.generators[s]} contains cell {c} but not its face {missing[0]}"
                    )
        S = []
        for c in range(n):
            S.append(frozenset(s for s, m in enumerate(self.mirrors) if c in m))
        object.__setattr__(self, "_S", tuple(S))

    # -- structure -------------------------------------------------------------

    @property
    def n_cells(self):
        return len(self.dims)

    @property
    def dimension(self):
        return max(self.dims, default=-1)

    def cells(self, dim=None):
        if dim is None:
            return list(range(self.n_cells))
        return [c for c, d in enumerate(self.dims) if d == dim]

    def S(self, c):
        """Generators whose mirror contains cell ``c``."""
        return self._S[c]

    def closure(self, cells):
        out = set(cells)
        stack = list(out)
        while stack:
            c = stack.pop()
            for f in self.faces[c]:
                if f not in out:
                    out.add(f)
                    stack.append(f)
        return frozenset(out)

    def cofaces(self, c):
        return {d: fc[c] for d, fc in enumerate(self.faces) if c in fc}

    def mirror_union(self, U):
        """Cells of ``X^U``, the union of the mirrors ``X_s`` for ``s`` in ``U``."""
        return frozenset(c for c in range(self.n_cells) if self._S[c] & frozenset(U))

    def mirror_intersection(self, T):
        """Cells of ``X_T``, the intersection of the mirrors (all of ``X`` for empty ``T``)."""
        T = frozenset(T)
        return frozenset(c for c in range(self.n_cells) if T <= self._S[c])

    def subcomplex(self, union=None, intersection=None):
        """``X^U`` or ``X_T`` as a mirrored complex in its own right."""
        if (union is None) == (intersection is None):
            raise ValueError("give exactly one of union= or intersection=")
        cells = self.mirror_union(union) if union is not None else self.mirror_intersection(intersection)
        return self.restrict(cells)

    def restrict(self, cells):
        cells = sorted(cells)
        if set(self.closure(cells)) != set(cells):
            raise NotASubcomplex("cell set is not closed under taking faces")
        new = {c: i for i, c in enumerate(cells)}
        return MirroredComplex(
            self.generators,
            [self.dims[c] for c in cells],
            [{new[f]: k for f, k in self.faces[c].items()} for c in cells],
            [[new[c] for c in m if c in new] for m in self.mirrors],
            tuple(self.labels[c] for c in cells),
        )

    # -- chains ------------------------------------------------------------------

    def chain_complex(self, cells=None, modulo=()):
        """Cellular chains on ``cells`` modulo the subcomplex ``modulo``.

        Returns ``(ChainComplexZ, bases)`` where ``bases[i]`` lists the cell ids
        spanning degree ``i`` in order.
        """
        cells = set(range(self.n_cells)) if cells is None else set(cells)
        modulo = set(modulo)
        live = sorted(cells - modulo)
        top = max((self.dims[c] for c in live), default=-1)
        bases = [[c for c in live if self.dims[c] == i] for i in range(top + 1)]
        index = [{c: j for j, c in enumerate(b)} for b in bases]
        d = [None]
        for i in range(1, top + 1):
            mat = np.zeros((len(bases[i - 1]), len(bases[i])), dtype=np.int64)
            for j, c in enumerate(bases[i]):
                for f, k in self.faces[c].items():
                    if f in index[i - 1]:
                        mat[index[i - 1][f], j] = k
            d.append(mat)
        return ChainComplexZ([len(b) for b in bases], d), bases

    def relative_complex(self, A=()):
        """``C_*(X, A)`` for a subcomplex ``A`` (a cell set or a complex restricted from ``X``)."""
        if isinstance(A, MirroredComplex):
            A = A.labels_in(self)
        A = frozenset(A)
        if self.closure(A) != A:
            raise NotASubcomplex("relative complex needs a subcomplex")
        return self.chain_complex(modulo=A)[0]

    def labels_in(self, other):
        """Cell ids in ``other`` of this complex's cells, matched by label."""
        lookup = {lab: i for i, lab in enumerate(other.labels)}
        try:
            return frozenset(lookup[lab] for lab in self.labels)
        except KeyError:
            raise NotASubcomplex("complex is not a subcomplex of the ambient complex") from None

    def euler_characteristic(self):
        return sum((-1) ** d for d in self.dims)

    # -- serialization -----------------------------------------------------------

    def to_json(self):
        return {
            "cells": [{"dim": d} for d in self.dims],
            "incidence": [[c, f, k] for c, fc in enumerate(self.faces) for f, k in sorted(fc.items())],
            "mirrors": {g: sorted(m) for g, m in zip(self.generators, self.mirrors)},
        }


def load_mirrored_complex(doc, generators=None):
    """Parse the JSON document format; ``generators`` fixes the mirror order."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "cells" not in doc:
        raise ParseError('complex document needs "cells"')
    try:
        dims = [int(c["dim"]) for c in doc["cells"]]
        faces = [dict() for _ in dims]
        for c, f, k in doc.get("incidence", []):
            faces[int(c)][int(f)] = faces[int(c)].get(int(f), 0) + int(k)
        mirror_doc = {str(k): list(v) for k, v in doc.get("mirrors", {}).items()}
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed complex document: {exc}") from None
    if generators is None:
        generators = tuple(mirror_doc)
    unknown = set(mirror_doc) - set(generators)
    if unknown:
        raise ParseError(f"mirrors for unknown generators {sorted(unknown)}")
    mirrors = [mirror_doc.get(g, []) for g in generators]
    return MirroredComplex(tuple(generators), dims, faces, mirrors)


# -- constructions ------------------------------------------------------------------


def order_complex(elements, less, generators=(), mirror_of=None):
    """Order complex of a finite poset: one simplex per nonempty chain.

    Chains are listed in increasing order; deleting the ``j``-th entry has
    sign ``(-1)^j``.  ``mirror_of(x)`` returns the generators whose mirror
    contains the vertex ``x``; a chain lies in a mirror iff all its vertices do.
    """
    elements = list(elements)
    chains = []

    def extend(chain):
        chains.append(tuple(chain))
        for y in elements:
            if less(chain[-1], y):
                extend(chain + [y])

    for x in elements:
        extend([x])
    chains.sort(key=lambda ch: (len(ch), [elements.index(x) for x in ch]))
    index = {ch: i for i, ch in enumerate(chains)}
    faces = []
    for ch in chains:
        fc = {}
        if len(ch) > 1:
            for j in range(len(ch)):
                fc[index[ch[:j] + ch[j + 1:]]] = (-1) ** j
        faces.append(fc)
    mirrors = [[] for _ in generators]
    if mirror_of is not None:
        for i, ch in enumerate(chains):
            common = set(range(len(generators)))
            for x in ch:
                common &= set(mirror_of(x))
            for s in common:
                mirrors[s].append(i)
    return MirroredComplex(tuple(generators), [len(ch) - 1 for ch in chains], faces, mirrors, tuple(chains))


def davis_chamber(system):
    """The chamber ``K``: order complex of the spherical subsets, with ``K_s`` the chains above ``{s}``."""
    poset = list(system.spherical_poset())
    return order_complex(
        poset,
        lambda a, b: a < b,
        system.generators,
        mirror_of=lambda T: T,
    )


def point(generators=()):
    return MirroredComplex(tuple(generators), [0], [{}], [[] for _ in generators])


def interval(generators, left=(), right=()):
    """An edge ``[v0, v1]`` with ``v0`` in the mirrors ``left`` and ``v1`` in ``right``."""
    gens = tuple(generators)
    mirrors = []
    for g in gens:
        m = []
        if g in left:
            m.append(0)
        if g in right:
            m.append(1)
        mirrors.append(m)
    return MirroredComplex(gens, [0, 0, 1], [{}, {}, {0: -1, 1: 1}], mirrors, ("v0", "v1", "e"))


def simplex_chamber(generators):
    """A simplex with one vertex per generator; the mirror of ``s`` is the facet opposite vertex ``s``."""
    gens = tuple(generators)
    n = len(gens)
    faces_of = [c for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]
    index = {c: i for i, c in enumerate(faces_of)}
    faces = []
    for c in faces_of:
        fc = {}
        if len(c) > 1:
            for j in range(len(c)):
                fc[index[c[:j] + c[j + 1:]]] = (-1) ** j
        faces.append(fc)
    mirrors = [[i for i, c in enumerate(faces_of) if s not in c] for s in range(n)]
    return MirroredComplex(gens, [len(c) - 1 for c in faces_of], faces, mirrors, tuple(faces_of))


def torsion_chamber(generators):
    """Two vertices, two parallel edges and a 2-cell with boundary ``2a - 2b``; every mirror is ``{v0}``.

    ``H_1`` of the complex is ``Z/2``, so it exercises torsion in the
    (co)homology formulas.
    """
    gens = tuple(generators)
    faces = [{}, {}, {0: -1, 1: 1}, {0: -1, 1: 1}, {2: 2, 3: -2}]
    return MirroredComplex(gens, [0, 0, 1, 1, 2], faces, [[0] for _ in gens], ("v0", "v1", "a", "b", "D"))
