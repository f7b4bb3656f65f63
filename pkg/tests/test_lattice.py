import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isg import lattice
from isg.errors import CapacityError

small = st.integers(-9, 9)
mat = lambda r, c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)


def unimodular(n, rng, steps=12):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-2, -1, 1, 2])
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]
    return U


def matmul(A, B):
    return [[sum(a * b for a, b in zip(r, c)) for c in zip(*B)] for r in A]


@settings(max_examples=100, deadline=None)
@given(mat(4, 4), st.integers(0, 10 ** 6))
def test_hnf_is_invariant_under_basis_change(M, seed):
    U = unimodular(4, random.Random(seed))
    assert lattice.hnf(matmul(U, M)) == lattice.hnf(M)


@settings(max_examples=100, deadline=None)
@given(mat(5, 3))
def test_hnf_shape(M):
    H = lattice.hnf(M)
    piv = []
    for r in H:
        c = next(i for i, x in enumerate(r) if x)
        assert r[c] > 0
        piv.append(c)
    assert piv == sorted(set(piv))
    for k, c in enumerate(piv):
        assert all(0 <= H[t][c] < H[k][c] for t in range(k))


@settings(max_examples=100, deadline=None)
@given(mat(3, 3))
def test_smith_and_det(M):
    d = lattice.det(M)
    assert d == round(np.linalg.det(np.array(M, dtype=float)))
    inv = lattice.smith_invariants(M)
    if d:
        assert math.prod(inv) == abs(d)
        assert all(inv[i + 1] % inv[i] == 0 for i in range(len(inv) - 1))


def test_span_index():
    assert lattice.span_rank_index([[2, 0], [0, 3]], 2) == (2, 6)
    assert lattice.span_rank_index([[2, 4], [1, 2]], 2)[1] is None
    assert lattice.span_rank_index([[2, 1], [1, 1]], 2) == (2, 1)


def test_inverse():
    M = [[2, 1], [1, 3]]
    Mi = lattice.inverse(M)
    assert matmul(M, Mi) == [[1, 0], [0, 1]]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 12))
def test_enumerate_short_matches_box_search(seed, bound):
    rng = random.Random(seed)
    A = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
    if lattice.det(A) == 0:
        return
    M = matmul([list(c) for c in zip(*A)], A)     # A^T A, positive definite
    got = {tuple(c): v for c, v in lattice.enumerate_short(M, bound)}
    # coefficients are bounded by sqrt(bound * (M^-1)_ii)
    Mi = lattice.inverse(M)
    R = [math.isqrt(int(bound * Mi[i][i]) + 1) + 1 for i in range(3)]
    want = {}
    for c in itertools.product(*(range(-r, r + 1) for r in R)):
        v = lattice.qform(M, c)
        if 0 < v <= bound:
            want[c] = v
    assert got == want


def test_enumeration_cap():
    with pytest.raises(CapacityError):
        lattice.enumerate_short([[int(i == j) for j in range(8)] for i in range(8)], 400, cap=1000)


def test_positive_definite():
    assert lattice.is_positive_definite([[2, 1], [1, 2]])
    assert not lattice.is_positive_definite([[1, 2], [2, 1]])
