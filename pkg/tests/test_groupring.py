import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxcoh import linalg
from coxcoh.corpus import corpus, get
from coxcoh.errors import NotNested, NotSpherical, OutOfTrustRadius
from coxcoh.groupring import GroupRing, multiply


def entries(finite=None):
    return [e.name for e in corpus() if finite is None or e.finite == finite]


def test_symmetrizer_of_s3(S3):
    A = GroupRing(S3)
    a = A.symmetrizer(S3.S)
    assert len(a.coeffs) == 6 and set(a.coeffs.values()) == {1}


def test_symmetrizer_needs_spherical(Dinf):
    with pytest.raises(NotSpherical):
        GroupRing(Dinf).symmetrizer(Dinf.S)


def test_augmentation_ideal_relation(S3):
    A = GroupRing(S3)
    s = A.gen("s")
    assert multiply(A.e() - s, A.e() + s) == A.zero()


def test_connecting_elements(S3):
    A = GroupRing(S3)
    c, d = A.connecting_elements(S3.S, S3.S)
    assert c == A.e() and d == A.e()
    c, _ = A.connecting_elements(S3.S, ())
    assert c == A.symmetrizer(S3.S)
    with pytest.raises(NotNested):
        A.connecting_elements(S3.subset("s"), S3.S)


@pytest.mark.parametrize("entry", entries())
def test_nested_factorizations(entry):
    W = get(entry).system()
    A = GroupRing(W)
    poset = list(W.spherical_poset())
    for U in poset:
        for T in poset:
            if T <= U:
                c, d = A.connecting_elements(U, T)
                assert multiply(A.symmetrizer(T), c) == A.symmetrizer(U)
                assert multiply(d, A.alternator(T)) == A.alternator(U)


@pytest.mark.parametrize("entry", entries())
def test_idempotent_up_to_order(entry):
    W = get(entry).system()
    A = GroupRing(W)
    for T in W.spherical_poset():
        a, h = A.symmetrizer(T), A.alternator(T)
        n = W.order(T)
        assert multiply(a, a) == a * n
        assert multiply(h, h) == h * n
        for s in T:
            assert multiply(a, A.gen(s)) == a
            assert multiply(A.gen(s), h) == -h


def test_decompose_examples(S3):
    A = GroupRing(S3)
    s, sts = S3.canonicalize("s"), S3.canonicalize("sts")
    assert A.decompose(A.gen("s"), "left") == {s: 1, (): -1}
    assert A.decompose(A.symmetrizer(S3.S), "left") == {sts: 1}
    assert A.decompose(A.zero(), "left") == {}


def test_invariance_examples(S3):
    A = GroupRing(S3)
    assert A.is_invariant(A.symmetrizer("s"), "s")
    assert not A.is_invariant(A.e(), "s")
    assert A.is_invariant(A.b_prime(S3.canonicalize("st")), "s")


def test_coinvariant_projection(S3):
    A = GroupRing(S3)
    x = A.e(S3.canonicalize("st")) + A.e()
    assert A.project_coinvariants(x, ()) == x.coeffs
    y = multiply(x, A.e() - A.gen("s"))
    assert A.project_coinvariants(y, "s") == {}


def test_filtration(S3):
    A = GroupRing(S3)
    assert len(A.filtration(0, "left", 3).basis) == 6
    assert [S3.format(w) for w in A.filtration(2, "left", 3).basis] == ["sts"]
    assert A.filtration(3, "left", 3).basis == ()


def test_top_quotient_of_s3(S3):
    A = GroupRing(S3)
    for s in range(2):
        q = A.quotient_action(S3.S, s, "left", 3)
        assert len(q.basis) == 1 and q.matrix == ((1,),)


def test_trust_radius(Dinf):
    A = GroupRing(Dinf)
    x = A.element({Dinf.canonicalize("stst"): 1}, trust_radius=2)
    with pytest.raises(OutOfTrustRadius):
        A.decompose(x, "left")


@pytest.mark.parametrize("entry", entries())
@pytest.mark.parametrize("side", ["left", "right"])
def test_change_of_basis_unitriangular(entry, side):
    W = get(entry).system()
    ball, rows = GroupRing(W).change_of_basis(side, 4)
    n = len(ball)
    for i in range(n):
        assert rows[i][i] == 1 and not any(rows[i][i + 1:])
    assert linalg.mat(rows, n).det() == 1


@pytest.mark.parametrize("entry", entries())
def test_invariants_spanned_by_descent_basis(entry):
    """The truncated invariants of W_U are spanned by b'_w with In'(w) containing U."""
    W = get(entry).system()
    A = GroupRing(W)
    N = 4
    ball = W.ball(N)
    for U in W.spherical_poset():
        members = [w for w in ball if U <= W.left_descents(w)]
        for w in members:
            v = A.b_prime(w)
            assert all(len(u) <= N for u in v.coeffs)
            assert A.is_invariant(v, U)
        cosets = {W.min_left_coset_rep(w, U) for w in ball if all(
            W.multiply(u, W.min_left_coset_rep(w, U)) in ball for u in W.subgroup_elements(U))}
        assert len(members) == len(cosets)


@pytest.mark.parametrize("entry", entries(finite=True))
def test_filtration_exactness(entry):
    """rank (F_p)^U = rank (F_{p+1})^U + sum over |T| = p, T ⊇ U of rank Q_<T>."""
    W = get(entry).system()
    A = GroupRing(W)
    N = len(W.longest_element(W.S))
    ball = W.elements()
    for U in W.spherical_poset():
        def rank_FU(p):
            return sum(1 for w in ball if U <= W.left_descents(w) and len(W.left_descents(w)) >= p)

        for p in range(W.rank + 1):
            pieces = sum(
                len(A.quotient_action(T, 0, "left", N).basis)
                for T in W.spherical_poset()
                if len(T) == p and U <= T
            )
            assert rank_FU(p) == rank_FU(p + 1) + pieces


@pytest.mark.parametrize("entry", entries())
def test_coinvariant_ranks(entry):
    W = get(entry).system()
    A = GroupRing(W)
    for k in range(W.rank + 1):
        for U in itertools.combinations(range(W.rank), k):
            rank, expected = A.coinvariant_basis_rank(frozenset(U), 4)
            assert rank == expected


def test_solomon_s3(S3):
    rep = GroupRing(S3).solomon_check()
    assert rep["ok"]
    assert sorted(d for d, _ in rep["left"].values()) == [1, 1, 2, 2]


def test_solomon_a3(A3):
    assert GroupRing(A3).solomon_check()["ok"]


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.lists(st.sampled_from("stu"), max_size=5), st.integers(-3, 3)), max_size=5),
    st.lists(st.tuples(st.lists(st.sampled_from("stu"), max_size=5), st.integers(-3, 3)), max_size=5),
)
def test_decompose_recompose(xs, ys):
    W = get("A3").system()
    A = GroupRing(W)
    x = A.zero()
    for word, c in xs:
        x = x + A.e(W.canonicalize(word)) * c
    for side in ("left", "right"):
        assert A.recompose(A.decompose(x, side), side) == x
    y = A.zero()
    for word, c in ys:
        y = y + A.e(W.canonicalize(word)) * c
    assert (multiply(x, y)).augmentation() == x.augmentation() * y.augmentation()
