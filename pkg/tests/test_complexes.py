import itertools
import json

import pytest

from coxcoh.complexes import (
    davis_chamber,
    interval,
    load_mirrored_complex,
    order_complex,
    point,
    simplex_chamber,
    torsion_chamber,
)
from coxcoh.corpus import corpus, get
from coxcoh.errors import BadIncidence, MirrorNotSubcomplex, NotASubcomplex, ParseError
from coxcoh.homology import cohomology, homology


def test_chamber_of_z2(Z2):
    K = davis_chamber(Z2)
    assert sorted(K.dims) == [0, 0, 1]
    (mirror,) = K.mirrors
    assert len(mirror) == 1 and K.dims[next(iter(mirror))] == 0


def test_chamber_of_infinite_dihedral(Dinf):
    K = davis_chamber(Dinf)
    assert sorted(K.dims) == [0, 0, 0, 1, 1]
    leaves = K.mirror_union(Dinf.S)
    assert len(leaves) == 2 and all(K.dims[c] == 0 for c in leaves)
    assert len(K.mirror_intersection(Dinf.subset("s"))) == 1


def test_tripod_chamber(tripod):
    K = davis_chamber(tripod)
    assert len(K.cells(1)) == 3 and len(K.cells(0)) == 4
    assert len(K.mirror_union(tripod.S)) == 3
    assert K.mirror_union(frozenset()) == frozenset()
    assert cohomology(K.relative_complex(K.mirror_union(tripod.S))).betti == (0, 2)


def test_relative_to_everything_is_zero(S3):
    K = davis_chamber(S3)
    assert K.relative_complex(range(K.n_cells)).is_zero()


def test_interval_relative_to_ends(Dinf):
    X = interval(Dinf.generators, ["s"], ["t"])
    H = cohomology(X.relative_complex(X.mirror_union(Dinf.S)))
    assert H.betti == (0, 1)


def test_interval_matches_chamber(Dinf):
    X = interval(Dinf.generators, ["s"], ["t"])
    K = davis_chamber(Dinf)
    for T in [frozenset(), Dinf.subset("s"), Dinf.subset("t"), Dinf.S]:
        assert homology(X.relative_complex(X.mirror_union(T))) == homology(K.relative_complex(K.mirror_union(T)))


def test_point_is_valid():
    X = point()
    assert X.n_cells == 1 and homology(X.chain_complex()[0]).betti == (1,)


def test_missing_face_in_mirror():
    doc = {"cells": [{"dim": 0}, {"dim": 0}, {"dim": 1}], "incidence": [[2, 0, -1], [2, 1, 1]], "mirrors": {"s": [2]}}
    with pytest.raises(MirrorNotSubcomplex):
        load_mirrored_complex(doc)


def test_bad_incidence():
    doc = {"cells": [{"dim": 0}, {"dim": 0}], "incidence": [[1, 0, 1]], "mirrors": {}}
    with pytest.raises(BadIncidence):
        load_mirrored_complex(doc)


def test_parse_errors():
    with pytest.raises(ParseError):
        load_mirrored_complex("{")
    with pytest.raises(ParseError):
        load_mirrored_complex({"incidence": []})


def test_restrict_needs_subcomplex(S3):
    K = davis_chamber(S3)
    edge = K.cells(1)[0]
    with pytest.raises(NotASubcomplex):
        K.restrict([edge])


def test_order_complex_orientation():
    X = order_complex([1, 2, 3], lambda a, b: a < b)
    assert sorted(X.dims) == [0, 0, 0, 1, 1, 1, 2]
    assert homology(X.chain_complex()[0]).betti == (1,)


def test_torsion_chamber_has_z2():
    X = torsion_chamber(["s"])
    assert homology(X.chain_complex()[0])[1] == (0, (2,))


def test_simplex_chamber_mirrors():
    X = simplex_chamber("stu")
    for s in range(3):
        facet = X.subcomplex(intersection=[s])
        assert facet.dimension == 1


@pytest.mark.parametrize("entry", [e.name for e in corpus()])
def test_chamber_is_contractible(entry):
    W = get(entry).system()
    K = davis_chamber(W)
    assert homology(K.chain_complex()[0]).betti == (1,)


@pytest.mark.parametrize("entry", [e.name for e in corpus()])
def test_mirror_monotonicity(entry):
    W = get(entry).system()
    K = davis_chamber(W)
    subsets = [frozenset(c) for k in range(W.rank + 1) for c in itertools.combinations(range(W.rank), k)]
    for U in subsets:
        for V in subsets:
            if U <= V:
                assert K.mirror_union(U) <= K.mirror_union(V)
                assert K.mirror_intersection(V) <= K.mirror_intersection(U)
    for c in range(K.n_cells):
        assert K.S(c) == frozenset(s for s in range(W.rank) if c in K.mirrors[s])


@pytest.mark.parametrize("entry", [e.name for e in corpus()])
def test_euler_characteristic_of_relative_complexes(entry):
    W = get(entry).system()
    K = davis_chamber(W)
    for k in range(W.rank + 1):
        for U in itertools.combinations(range(W.rank), k):
            C = K.relative_complex(K.mirror_union(U))
            assert homology(C).euler_characteristic() == C.euler_characteristic()


def test_json_round_trip(A3):
    K = davis_chamber(A3)
    again = load_mirrored_complex(json.loads(json.dumps(K.to_json())), A3.generators)
    assert again.dims == K.dims and again.faces == K.faces and again.mirrors == K.mirrors
