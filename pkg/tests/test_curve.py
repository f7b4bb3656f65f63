import random

import pytest
from hypothesis import given, settings, strategies as st

from isg.curve import (Curve, canonical_model, count_points, curve_from_j, is_supersingular,
                       scalar_mul, subgroups_of_order, torsion_points, two_torsion, velu)
from isg.errors import NotSupersingularError, ParameterError
from isg.ff import make_fp2
from oracles.cgl_oracle import F as OracleField, count as oracle_count, j_of as oracle_j

P = 11


@pytest.fixture(scope="module")
def oracle():
    return OracleField(P)


def to_oracle(x):
    return (x.c[1], x.c[0])


def test_special_j_invariants():
    F = make_fp2(101)
    assert Curve(F.zero, F.one).j_invariant() == 0
    assert Curve(F.one, F.zero).j_invariant() == 1728


def test_singular_curve_rejected():
    F = make_fp2(101)
    with pytest.raises(ParameterError):
        Curve(F(-3), F(2))       # x^3 - 3x + 2 = (x-1)^2 (x+2)


@pytest.mark.parametrize("j", [0, 1728, 5, 77, "3*u+4"])
def test_curve_from_j_round_trip(j):
    F = make_fp2(101)
    jj = F.parse(str(j)) if isinstance(j, str) else F(j)
    assert curve_from_j(jj).j_invariant() == jj


def test_point_count_matches_oracle(oracle):
    F = make_fp2(P)
    rng = random.Random(3)
    for _ in range(15):
        a, b = F.random(rng), F.random(rng)
        if not (4 * a ** 3 + 27 * b * b):
            continue
        assert count_points(Curve(a, b)) == oracle_count(oracle, to_oracle(a), to_oracle(b))


def test_supersingular_js_match_trace_oracle(oracle):
    # j is supersingular iff #E = p^2 + 1 - t with p | t, for any model of j
    F = make_fp2(P)
    got, want = set(), set()
    for j in F.elements():
        if is_supersingular(curve_from_j(j)):
            got.add(j)
        E = curve_from_j(j)
        t = P * P + 1 - oracle_count(oracle, to_oracle(E.a), to_oracle(E.b))
        if t % P == 0:
            want.add(j)
    assert got == want == {F(0), F(1728)}


def test_canonical_model_is_least_model_with_square_group_order(oracle):
    F = make_fp2(P)
    for j in (F(0), F(1728)):
        E = canonical_model(j)
        assert count_points(E) == (P + 1) ** 2
        best = None
        for a in F.elements():
            for b in F.elements():
                if (4 * a ** 3 + 27 * b * b) and Curve(a, b).j_invariant() == j:
                    if oracle_count(oracle, to_oracle(a), to_oracle(b)) == (P + 1) ** 2:
                        best = (a, b)
                        break
            if best:
                break
        assert (E.a, E.b) == best


def test_canonical_model_rejects_ordinary_j():
    F = make_fp2(P)
    with pytest.raises(NotSupersingularError):
        canonical_model(F(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(-50, 50))
def test_group_law(s1, s2, n):
    E = canonical_model(make_fp2(103)(1728))
    P1 = E.random_point(random.Random(s1))
    P2 = E.random_point(random.Random(s2))
    assert (P1 + P2) - P2 == P1
    assert scalar_mul(n, P1) + scalar_mul(3, P1) == scalar_mul(n + 3, P1)
    # E(F_{p^2}) = Z/(p+1) x Z/(p+1) on this model
    assert scalar_mul(104, P1).is_zero()


def test_two_torsion_is_rational_on_canonical_model():
    E = canonical_model(make_fp2(101)(0))
    T = two_torsion(E)
    assert len(T) == 3 and all(scalar_mul(2, t).is_zero() for t in T)


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_velu_is_a_homomorphism_onto_a_supersingular_curve(ell):
    E = canonical_model(make_fp2(103)(1728))
    rng = random.Random(ell)
    for K in subgroups_of_order(E, ell):
        phi = velu(E, K)
        assert is_supersingular(phi.codomain)
        assert count_points(phi.codomain) == count_points(E)
        P1, P2 = E.random_point(rng), E.random_point(rng)
        assert phi(P1 + P2) == phi(P1) + phi(P2)


def test_number_of_subgroups():
    E = canonical_model(make_fp2(101)(0))
    assert len(subgroups_of_order(E, 3)) == 4
    assert len(torsion_points(E, 3)) == 9


def test_velu_kills_its_kernel():
    E = canonical_model(make_fp2(101)(0))
    for T in two_torsion(E):
        phi = velu(E, T)
        assert phi(T).is_zero()
        assert not any(phi(S).is_zero() for S in two_torsion(E) if S != T)
