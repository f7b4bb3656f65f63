import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from isg.errors import ParameterError
from isg.ff import make_fp2
from isg.ssgraph import (SSGraph, build_graph, class_number, enumerate_ss,
                         essential_automorphisms, find_permutation, frobenius_involution,
                         hp_root_js, phi2, phi2_row, seed_ss_j, spectral_report, spine,
                         ss_polynomial)
from oracles.cgl_oracle import F as OracleField, count as oracle_count


def oracle_ss_count(p):
    """Count j in F_{p^2} whose curve has trace divisible by p, by brute force."""
    O = OracleField(p)
    n = 0
    for j in O.elems:
        if j == (0, 0):
            a, b = (0, 0), (0, 1)
        elif j == O.k(1728):
            a, b = (0, 1), (0, 0)
        else:
            # y^2 = x^3 + 3k x + 2k with k = j / (1728 - j)
            k = O.div(j, O.sub(O.k(1728), j))
            a, b = O.mul(O.k(3), k), O.mul(O.k(2), k)
        t = p * p + 1 - oracle_count(O, a, b)
        n += t % p == 0
    return n


@pytest.mark.parametrize("p", [5, 7, 13, 17, 19, 23])
def test_class_number_matches_brute_force(p):
    assert class_number(p) == oracle_ss_count(p) == len(enumerate_ss(p)[0])


@pytest.mark.parametrize("p", [5, 7, 11, 13, 37, 101, 103, 197, 389])
def test_bfs_agrees_with_hasse_invariant_roots(p):
    js, ws = enumerate_ss(p)
    assert set(js) == hp_root_js(p)
    assert js == sorted(js)
    # Eichler mass: sum 1/#Aut = (p-1)/24
    assert sum(1 / w for w in ws) == pytest.approx((p - 1) / 24)


def test_seed_is_supersingular_for_every_residue_class():
    for p in (13, 37, 61, 73, 97, 109, 157, 181, 193, 229):
        assert seed_ss_j(p) in set(enumerate_ss(p)[0])


@pytest.mark.parametrize("bad", [4, 1, 3, 9, 25])
def test_rejects_bad_p(bad):
    with pytest.raises(ParameterError):
        build_graph(bad, 2)


def test_rejects_ell_equal_to_p():
    with pytest.raises(ParameterError):
        build_graph(5, 5)


@pytest.mark.parametrize("p", [101, 103, 163])
def test_two_isogeny_rows_are_roots_of_phi2(p):
    g = build_graph(p, 2)
    for i in range(g.h):
        row = Counter({k: m for k, m in enumerate(g.adjacency[i]) if m})
        assert phi2_row(g, i) == row
        for k in row:
            assert phi2(g.vertices[i], g.vertices[k]) == 0


@pytest.mark.parametrize("p,ell", [(101, 2), (101, 3), (103, 5), (131, 7)])
def test_degree_and_connectivity(p, ell):
    g = build_graph(p, ell)
    assert all(sum(r) == ell + 1 for r in g.adjacency)
    seen, stack = {0}, [0]
    while stack:
        i = stack.pop()
        for k, m in enumerate(g.adjacency[i]):
            if m and k not in seen:
                seen.add(k)
                stack.append(k)
    assert len(seen) == g.h


def test_p101_has_nine_vertices_and_json_round_trip():
    g = build_graph(101, 2)
    assert g.h == 9
    g2 = SSGraph.from_json(g.to_json())
    assert g2.vertices == g.vertices and g2.adjacency == g.adjacency and g2.weights == g.weights


def test_dot_draws_each_edge_with_multiplicity():
    g = build_graph(101, 2)
    assert g.to_dot().count("->") == 3 * g.h


@pytest.mark.parametrize("p,ell", [(101, 2), (103, 3), (227, 2), (229, 3)])
def test_ramanujan(p, ell):
    r = spectral_report(build_graph(p, ell))
    assert r.trivial_mult == 1
    assert r.ramanujan(ell)
    assert not r.has_minus_trivial
    assert max(r.eigenvalues) == pytest.approx(ell + 1)


def test_frobenius_fixes_exactly_the_spine():
    g = build_graph(101, 2)
    pi = frobenius_involution(g)
    assert [i for i in range(g.h) if pi[i] == i] == spine(g)
    assert all(g.vertices[i].is_prime_subfield() for i in spine(g))


@pytest.mark.parametrize("p", [37, 47, 73, 101, 103])
def test_ss_polynomial_factors_split_the_supersingular_locus(p):
    S = ss_polynomial(p)
    js = enumerate_ss(p)[0]
    assert sum(len(f) - 1 for f in S.factors) == len(js)
    F = make_fp2(p)
    for f in S.factors:
        assert len(f) - 1 in (1, 2) and f[-1] == 1
        roots = [j for j in js if sum(F(c) * j ** i for i, c in enumerate(f)) == 0]
        assert len(roots) == len(f) - 1


def test_automorphisms_at_101():
    g = build_graph(101, 2)
    r = essential_automorphisms(g)
    assert r.order == 2
    assert set(r.elements) == {tuple(range(g.h)), tuple(frobenius_involution(g))}


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(0, 10 ** 6))
def test_find_permutation_recovers_a_relabeling(h, seed):
    rng = random.Random(seed)
    A = [[rng.randrange(3) for _ in range(h)] for _ in range(h)]
    s = list(range(h))
    rng.shuffle(s)
    B = [[0] * h for _ in range(h)]
    for i in range(h):
        for j in range(h):
            B[s[i]][s[j]] = A[i][j]
    t = find_permutation(A, B)
    assert t is not None
    assert all(A[i][j] == B[t[i]][t[j]] for i in range(h) for j in range(h))


def test_find_permutation_none_for_different_graphs():
    assert find_permutation([[0, 1], [1, 0]], [[1, 0], [0, 1]]) is None


@pytest.mark.parametrize("p", [37, 47, 73, 101])
def test_ss_polynomial_agrees_with_displayed_factors_mod_p(p):
    from isg.acceptance import DISPLAYED_SP, parse_factored
    S = ss_polynomial(p)
    assert sorted(tuple(c % p for c in f) for f in S.factors) == parse_factored(DISPLAYED_SP[p], p)


def test_ss_polynomial_rendering():
    assert ss_polynomial(37).text() == "(x-8)(x^2-6x-6)"
    assert ss_polynomial(101).text() == "x(x-3)(x-21)(x+44)(x+42)(x+37)(x+35)(x^2+27x-47)"
