import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artinian.fields import FieldTower
from artinian.linalg import (Field, IntegersMod, canonicalize, intersect, kernel, reduce, solve,
                             sum_spaces)
from artinian.localring import polynomial_ring_quotient

Z4 = IntegersMod(2, 2)
F2 = IntegersMod(2, 1)
F3 = IntegersMod(3, 1)


def span(rows, ring, n):
    """All combinations of ``rows``, by brute force."""
    mod = ring.modulus
    out = set()
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n)
    for cs in itertools.product(range(mod), repeat=rows.shape[0]):
        out.add(tuple(int(x) for x in (np.array(cs) @ rows) % mod) if rows.shape[0] else (0,) * n)
    return out


def test_canonical_already():
    S = canonicalize([[2]], Z4)
    assert S.rows.tolist() == [[2]]


def test_canonical_full_space():
    S = canonicalize([[1, 1], [0, 1]], F2)
    assert S.rows.tolist() == [[1, 0], [0, 1]]


def test_canonical_two_rows_z4():
    S = canonicalize([[2, 0], [0, 2], [2, 2]], Z4)
    assert S.rank == 2
    assert not np.any(reduce([2, 2], S))
    assert set(S.elements()) == span([[2, 0], [0, 2], [2, 2]], Z4, 2)


def test_reduce_member_and_zero():
    S = canonicalize([[1, 2], [0, 2]], Z4)
    assert not np.any(reduce([3, 0], S))
    assert not np.any(reduce([0, 0], S))


def test_reduce_nonmember():
    S = canonicalize([[2, 0]], Z4)
    assert reduce([1, 0], S).tolist() == [1, 0]
    assert set(S.elements()) == {(0, 0), (2, 0)}


def test_reduce_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        reduce([1, 0, 0], canonicalize([[2, 0]], Z4))


def test_kernel_identity():
    assert kernel(np.eye(3, dtype=np.int64), F3).rank == 0


def test_kernel_two_in_z4():
    K = kernel([[2]], Z4)
    assert K.rows.tolist() == [[2]]


def test_kernel_multiplication_by_t():
    R = polynomial_ring_quotient(FieldTower(2), ["T"], ["T^2"])
    T = R.gen("T").vec
    M = np.array([R.mul_vec(e, T) for e in np.eye(R.N, dtype=np.int64)])
    K = kernel(M, F2)
    assert K.rank == 1
    assert R.format(K.rows[0]) == "T"
    members = [x for x in R.all_vectors if not np.any(R.mul_vec(x, T))]
    assert sorted(R.format(m) for m in members) == ["0", "T"]


@pytest.mark.parametrize("ring,n", [(Z4, 3), (IntegersMod(2, 3), 2), (IntegersMod(3, 2), 2), (F3, 3)])
def test_membership_exhaustive(ring, n):
    rng = np.random.default_rng(7)
    for _ in range(6):
        rows = rng.integers(0, ring.modulus, size=(rng.integers(1, 4), n))
        S = canonicalize(rows, ring, n)
        members = span(rows, ring, n)
        for v in itertools.product(range(ring.modulus), repeat=n):
            assert (not np.any(reduce(list(v), S))) == (v in members)
        assert S.size() == len(members)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([Z4, IntegersMod(2, 3), IntegersMod(3, 2), F3]), st.data())
def test_canonical_generating_set_independent(ring, data):
    n = 3
    k = data.draw(st.integers(1, 4))
    rows = np.array(data.draw(st.lists(st.lists(st.integers(0, ring.modulus - 1), min_size=n, max_size=n),
                                       min_size=k, max_size=k)), dtype=np.int64)
    S = canonicalize(rows, ring, n)
    # idempotent
    assert canonicalize(S.rows, ring, n) == S
    # another generating set: random invertible mixing plus a redundant combination
    mix = np.array(data.draw(st.lists(st.integers(0, ring.modulus - 1), min_size=k, max_size=k)))
    extra = (mix @ rows) % ring.modulus
    shuffled = np.vstack([rows[::-1], extra])
    assert canonicalize(shuffled, ring, n) == S


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([Z4, IntegersMod(2, 3), F3]), st.data())
def test_kernel_property(ring, data):
    m, n = 3, 2
    A = np.array(data.draw(st.lists(st.lists(st.integers(0, ring.modulus - 1), min_size=n, max_size=n),
                                    min_size=m, max_size=m)), dtype=np.int64)
    K = kernel(A, ring)
    for row in K.rows:
        assert not np.any((row @ A) % ring.modulus)
    for x in itertools.product(range(ring.modulus), repeat=m):
        if not np.any((np.array(x) @ A) % ring.modulus):
            assert not np.any(reduce(list(x), K))


def test_field_coefficients_f4():
    # over F_4 the rows (1, t) and (t, 1) are independent since t^2 != 1
    F4 = Field(FieldTower(2, 2))
    assert canonicalize([[1, 2], [2, 1]], F4).rank == 2
    # (1, t) and (t, t^2) are proportional
    S = canonicalize([[1, 2], [2, FieldTower(2, 2).mul(2, 2)]], F4)
    assert S.rank == 1 and S.size() == 4


def test_solve_and_intersection():
    G = np.array([[2, 0], [1, 1]])
    x = solve(G, [3, 1], Z4)
    assert ((x @ G) % 4).tolist() == [3, 1]
    assert solve(np.array([[2, 0]]), [1, 0], Z4) is None
    A = canonicalize([[1, 0]], Z4)
    B = canonicalize([[2, 2], [0, 2]], Z4)
    I = intersect(A, B)
    assert set(I.elements()) == set(A.elements()) & set(B.elements())
    assert set(sum_spaces(A, B).elements()) == span([[1, 0], [2, 2], [0, 2]], Z4, 2)
