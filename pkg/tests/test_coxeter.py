import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxcoh.corpus import corpus, get
from coxcoh.coxeter import CoxeterMatrix, CoxeterSystem, coxeter_matrix
from coxcoh.errors import BadDiagonal, NonSymmetric, ParseError, ResourceLimit, UnknownGenerator


def names(W, T):
    return sorted(W.subset_names(T))


def test_rank_one_is_z2():
    W = CoxeterSystem.from_json({"generators": ["s"], "m": [[1]]})
    assert [W.format(w) for w in W.ball(5)] == ["e", "s"]


def test_s3_has_six_elements(S3):
    assert len(S3.ball(3)) == 6
    assert len(S3.ball(10)) == 6


def test_a3_has_24_elements(A3):
    assert len(A3.elements()) == 24
    assert A3.is_finite_type(A3.S)


def test_asymmetric_input_rejected():
    with pytest.raises(NonSymmetric):
        CoxeterSystem.from_json({"generators": ["s", "t"], "m": [[1, 2], [3, 1]]})


def test_bad_diagonal_rejected():
    with pytest.raises(BadDiagonal):
        CoxeterMatrix(("s",), ((2,),))


@pytest.mark.parametrize("doc", ['{"generators": ["s"]}', "not json", '{"generators": ["s"], "m": [["x"]]}'])
def test_malformed_documents(doc):
    with pytest.raises(ParseError):
        CoxeterMatrix.from_json(doc)


def test_unknown_generator(S3):
    with pytest.raises(UnknownGenerator):
        S3.gen("u")


def test_canonical_words(S3, Dinf):
    assert S3.canonicalize("ss") == ()
    assert S3.names(S3.canonicalize("tst")) == ["s", "t", "s"]
    w = Dinf.canonicalize("stst")
    assert Dinf.names(w) == ["s", "t", "s", "t"] and len(w) == 4


def test_descents(S3):
    assert not S3.right_descents(()) and not S3.left_descents(())
    st_ = S3.canonicalize("st")
    assert names(S3, S3.left_descents(st_)) == ["s"]
    assert names(S3, S3.right_descents(st_)) == ["t"]
    w0 = S3.canonicalize("sts")
    assert S3.left_descents(w0) == S3.right_descents(w0) == S3.S


def test_spherical_subsets(S3, Dinf, tripod, A3):
    assert [names(Dinf, T) for T in Dinf.spherical_poset()] == [[], ["s"], ["t"]]
    assert [names(tripod, T) for T in tripod.spherical_poset()] == [[], ["s"], ["t"], ["u"]]
    assert len(S3.spherical_poset()) == 4
    assert not Dinf.is_finite_type(Dinf.S)
    assert A3.is_finite_type(A3.S)


def test_infinite_dihedral_ball(Dinf):
    ball = Dinf.ball(3)
    assert sorted(Dinf.format(w) for w in ball) == sorted(["e", "s", "t", "st", "ts", "sts", "tst"])
    assert [w for w in Dinf.ball(0)] == [()]


def test_reduced_representatives(S3, Dinf):
    left = S3.reduced_reps("s", "left", 3)
    assert sorted(S3.format(w) for w in left) == ["e", "t", "ts"]
    assert Dinf.reduced_reps("s,t", "right", 2) == [()]


def test_longest_elements(S3):
    assert S3.longest_element(frozenset()) == ()
    assert S3.format(S3.longest_element(S3.S)) == "sts"
    assert S3.format(S3.longest_element(S3.subset("s"))) == "s"


def test_resource_limit():
    W = CoxeterSystem(coxeter_matrix("stu", default=float("inf")), max_elements=50)
    with pytest.raises(ResourceLimit):
        W.ball(10)


def test_env_cap(monkeypatch):
    monkeypatch.setenv("COXCOH_MAX_ELEMENTS", "10")
    W = get("tripod").system()
    with pytest.raises(ResourceLimit):
        W.ball(5)


@pytest.mark.parametrize("entry", [e.name for e in corpus()])
def test_length_changes_by_one(entry):
    W = get(entry).system()
    N = 4
    for w in W.ball(N - 1):
        for s in range(W.rank):
            assert abs(len(W.rmul(w, s)) - len(w)) == 1
            assert abs(len(W.lmul(s, w)) - len(w)) == 1


@pytest.mark.parametrize("entry", [e.name for e in corpus()])
def test_descents_of_inverse(entry):
    W = get(entry).system()
    for w in W.ball(4):
        assert W.right_descents(w) == W.left_descents(W.inverse(w))


@pytest.mark.parametrize("entry", [e.name for e in corpus() if e.finite])
def test_unique_element_with_full_descent(entry):
    W = get(entry).system()
    top = [w for w in W.elements() if W.right_descents(w) == W.S]
    assert top == [W.longest_element(W.S)]


words = st.lists(st.sampled_from("stu"), max_size=12)


@settings(max_examples=200, deadline=None)
@given(words)
def test_canonicalize_idempotent(word):
    W = get("A3").system()
    w = W.canonicalize(word)
    assert W.canonicalize(w) == w
    assert w in W.reduced_words(w)


@settings(max_examples=100, deadline=None)
@given(words, st.integers(0, 2**32 - 1))
def test_braid_shuffles_preserve_element(word, seed):
    W = get("A3").system()
    w = W.canonicalize(word)
    rng = random.Random(seed)
    expressions = sorted(W.reduced_words(w))
    u = rng.choice(expressions)
    assert W.canonicalize(u) == w
    assert W.canonicalize(W.names(u)) == w


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_multiplication_is_associative_with_inverse(a, b):
    W = get("tripod").system()
    u, v = W.canonicalize(a), W.canonicalize(b)
    assert W.multiply(W.multiply(u, v), W.inverse(v)) == u
