import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxcoh import linalg
from coxcoh.errors import ValidationError
from coxcoh.homology import ChainComplexZ, cohomology, homology, smith_normal_form


def test_snf_zero_and_identity():
    r = smith_normal_form(np.zeros((2, 3), dtype=np.int64))
    assert r.diagonal == []
    r = smith_normal_form(np.eye(3, dtype=np.int64))
    assert r.diagonal == [1, 1, 1]


def test_snf_small():
    assert smith_normal_form(np.array([[2, 4], [6, 8]])).diagonal == [2, 4]


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 5).flatmap(
        lambda r: st.integers(1, 5).flatmap(
            lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )
)
def test_snf_certificate(rows):
    M = np.array(rows, dtype=object)
    res = smith_normal_form(M)
    assert np.array_equal(res.U.astype(object) @ M @ res.V.astype(object), res.D.astype(object))
    d = res.diagonal
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    for T in (res.U, res.V):
        assert abs(int(linalg.mat([[int(x) for x in row] for row in T], T.shape[1]).det())) == 1


def test_point_and_circle():
    assert homology(ChainComplexZ([1])).betti == (1,)
    circle = ChainComplexZ([1, 1], [None, np.zeros((1, 1), dtype=np.int64)])
    assert homology(circle).betti == (1, 1)
    assert cohomology(circle).betti == (1, 1)


def test_projective_plane_torsion():
    C = ChainComplexZ([1, 1, 1], [None, np.array([[0]]), np.array([[2]])])
    H = homology(C)
    assert H.betti == (1, 0)
    assert H[1] == (0, (2,))
    assert cohomology(C)[2] == (0, (2,))


def test_interval_relative_to_endpoints():
    # the quotient by both endpoints keeps only the edge
    C = ChainComplexZ([0, 1])
    assert cohomology(C).betti == (0, 1)


def test_bad_composite_rejected():
    with pytest.raises(ValidationError):
        ChainComplexZ([1, 1, 1], [None, np.array([[1]]), np.array([[1]])])


def test_empty_complex():
    C = ChainComplexZ([])
    assert C.is_zero() and homology(C).betti == ()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=4), st.integers(0, 10**6))
def test_euler_characteristic_and_rank_nullity(ranks, seed):
    rng = np.random.default_rng(seed)
    # build d_i = A_i B_i type maps with d_{i-1} d_i = 0 via projections onto complementary blocks
    d = [None]
    for i in range(1, len(ranks)):
        d.append(np.zeros((ranks[i - 1], ranks[i]), dtype=np.int64))
    if len(ranks) >= 2 and ranks[0] and ranks[1]:
        d[1] = rng.integers(-3, 4, size=(ranks[0], ranks[1]))
        d[1][:, 0] = 0  # keep something in the kernel
    C = ChainComplexZ(ranks, d)
    H = homology(C)
    assert H.euler_characteristic() == C.euler_characteristic()
    assert cohomology(C).euler_characteristic() == C.euler_characteristic()
