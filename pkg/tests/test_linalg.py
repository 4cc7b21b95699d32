from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxcoh import linalg

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_nullity(rows):
    M = linalg.mat(rows, len(rows[0]))
    K = linalg.left_kernel(M)
    assert K.nrows() + linalg.rank(M) == M.nrows()
    if K.nrows():
        assert not any(K * M)


@settings(max_examples=60, deadline=None)
@given(matrices, matrices)
def test_intersection_is_contained_in_both(a, b):
    n = min(len(a[0]), len(b[0]))
    A = linalg.mat([r[:n] for r in a], n)
    B = linalg.mat([r[:n] for r in b], n)
    I = linalg.intersect(A, B)
    for M in (A, B):
        assert linalg.rank(linalg.vstack([M, I], n)) == linalg.rank(M)


def test_restricted_trace_of_swap():
    swap = linalg.mat([[0, 1, 0], [1, 0, 0], [0, 0, 1]], 3)
    span = linalg.mat([[1, 1, 0], [1, -1, 0]], 3)
    assert linalg.restricted_trace(span, swap) == 0
    assert linalg.restricted_trace(linalg.mat([[1, -1, 0]], 3), swap) == Fraction(-1)


def test_restricted_trace_needs_invariance():
    swap = linalg.mat([[0, 1], [1, 0]], 2)
    with pytest.raises(ValueError):
        linalg.restricted_trace(linalg.mat([[1, 0]], 2), swap)
