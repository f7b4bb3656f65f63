import math

import pytest
from hypothesis import given, settings, strategies as st

from isg import lattice
from isg.errors import ParameterError
from isg.latgen import (ZLattice, e8, ell_powers, generated_by_norms, hyperbolic_norm,
                        local_witness_2, local_witness_p, order_profile, span_index,
                        vectors_of_norm, witness_2_matrix, witness_p_matrix)


def sigma3(k):
    return sum(d ** 3 for d in range(1, k + 1) if k % d == 0)


def test_e8_is_even_unimodular():
    L = e8()
    assert L.det() == 1
    assert all(L.gram[i][i] == 2 for i in range(8))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_e8_shell_sizes_follow_eisenstein_series(k):
    # theta_E8 = E_4 = 1 + 240 sum sigma_3(k) q^k, in the norm 2k
    assert len(vectors_of_norm(e8(), 2 * k)) == 240 * sigma3(k)


@pytest.mark.parametrize("s", [2, 4, 6, 8, 10])
def test_e8_generated_by_each_shell(s):
    rep = generated_by_norms(e8(), [s], s)
    assert rep.generated and rep.index == 1
    assert span_index(rep.witness, 8) == 1
    assert lattice.smith_invariants(rep.witness)[:8] == [1] * 8


def test_witness_is_minimal():
    rep = generated_by_norms(e8(), [2], 2)
    for i in range(len(rep.witness)):
        assert span_index(rep.witness[:i] + rep.witness[i + 1:], 8) != 1


def test_sublattice_index():
    L = ZLattice([[1, 0], [0, 4]])
    assert generated_by_norms(L, [1], 1).index == math.inf
    assert generated_by_norms(L, [1, 4], 4).generated
    # norm 4 gives e2 and 2e1, norm 5 gives e1 + e2
    assert generated_by_norms(L, [4, 5], 5).generated
    assert generated_by_norms(ZLattice([[2, 0], [0, 2]]), [8], 8).index == 4


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=1, max_size=4), st.integers(1, 12))
def test_adding_norms_never_raises_the_index(norms, extra):
    L = ZLattice([[2, 1, 0], [1, 2, 1], [0, 1, 4]])
    a = generated_by_norms(L, norms, 12).index
    b = generated_by_norms(L, norms + [extra], 12).index
    assert b <= a
    if a != math.inf and b != math.inf:
        assert a % b == 0


def test_profile_is_monotone():
    rep = order_profile(103, 1, 2, 1024)
    idx = [i for _, i in rep.profile]
    assert all(b <= a for a, b in zip(idx, idx[1:]))
    assert rep.generated


def test_rejects_empty_norm_set():
    with pytest.raises(ParameterError):
        generated_by_norms(e8(), [100], 10)


def test_rejects_indefinite_gram():
    with pytest.raises(ParameterError):
        ZLattice([[0, 1], [1, 0]])


def test_ell_powers():
    assert ell_powers(2, 1024) == [2 ** k for k in range(11)]
    assert ell_powers(3, 1) == [1]


@settings(max_examples=100, deadline=None)
@given(st.integers(-10 ** 4, 10 ** 4))
def test_two_adic_witness(t):
    assert local_witness_2(t) == 1
    assert all(hyperbolic_norm(r) == 2 * t for r in witness_2_matrix(t))


@settings(max_examples=100, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_odd_witness(x, y, z):
    assert local_witness_p(x, y, z) == 2 * z
    s = x * x + y * y + z * z + 1
    assert all(sum(a * a for a in r) == s for r in witness_p_matrix(x, y, z))
