import random
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from isg.errors import ParameterError
from isg.ff import (frobenius, is_prime, legendre, make_ext, make_fp2, parse_elem,
                    poly_from_roots, poly_roots, sqrt)
from oracles.cgl_oracle import F as OracleField

PRIMES = [5, 7, 11, 13, 101, 103, 10007]


@lru_cache(maxsize=None)
def oracle(p):
    return OracleField(p)


def elems(p):
    return st.tuples(st.integers(0, p - 1), st.integers(0, p - 1))


def test_is_prime_matches_trial_division():
    def slow(n):
        return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))
    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if slow(n)]


@pytest.mark.parametrize("p,c", [(7, 6), (11, 10), (5, 2), (13, 2), (17, 3), (41, 3), (73, 5)])
def test_fp2_modulus(p, c):
    F = make_fp2(p)
    u = F.gen
    assert u * u == F(c)
    assert legendre(c, p) == -1


@pytest.mark.parametrize("bad", [1, 2, 3, 4, 9, 15, 100])
def test_fp2_rejects_bad_characteristic(bad):
    with pytest.raises(ParameterError):
        make_fp2(bad)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRIMES[:-1]), st.data())
def test_multiplication_agrees_with_oracle(p, data):
    F = make_fp2(p)
    O = oracle(p)
    x = data.draw(elems(p))
    y = data.draw(elems(p))
    fx, fy = F([x[1], x[0]]), F([y[1], y[0]])
    hi, lo = O.mul(x, y)
    assert fx * fy == F([lo, hi])
    hi, lo = O.add(x, y)
    assert fx + fy == F([lo, hi])


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRIMES), st.data())
def test_field_axioms(p, data):
    F = make_fp2(p)
    a, b, c = (F(list(reversed(data.draw(elems(p))))) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a + (-a) == F.zero
    assert a * F.one == a
    if a:
        assert a * a.inverse() == F.one
        assert (b / a) * a == b
        assert a ** (F.q - 1) == F.one


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PRIMES), st.data())
def test_frobenius_is_pth_power_and_involution(p, data):
    F = make_fp2(p)
    a = F(list(reversed(data.draw(elems(p)))))
    assert frobenius(a) == a ** p
    assert frobenius(frobenius(a)) == a
    assert (a * frobenius(a)).is_prime_subfield()


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PRIMES), st.data())
def test_sqrt(p, data):
    F = make_fp2(p)
    a = F(list(reversed(data.draw(elems(p)))))
    r = sqrt(a * a)
    assert r * r == a * a
    assert r <= -r
    # every element of F_p is a square in F_{p^2}
    assert sqrt(F(a.c[0])) is not None


def test_exactly_half_the_units_are_squares():
    F = make_fp2(11)
    squares = sum(1 for x in F.elements() if x and sqrt(x) is not None)
    assert squares == (F.q - 1) // 2


def test_order_puts_u_coefficient_first():
    F = make_fp2(101)
    assert F.parse("1*u+0") > F.parse("100")
    assert F.parse("3*u+5") < F.parse("3*u+6")
    assert sorted(F.elements())[:3] == [F(0), F(1), F(2)]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 100), st.integers(0, 100))
def test_text_round_trip(hi, lo):
    F = make_fp2(101)
    x = F([lo, hi])
    assert parse_elem(F, str(x)) == x
    assert str(x) == ("%d*u+%d" % (hi, lo) if hi else str(lo))


def test_parse_rejects_garbage():
    F = make_fp2(101)
    with pytest.raises(ParameterError):
        F.parse("1*u^2+3")
    with pytest.raises(ParameterError):
        F.parse("3++4")


def test_extension_field_has_right_size():
    K = make_ext(5, 3)
    assert K.q == 125
    g = K.gen
    assert g ** 124 == K.one
    assert g ** 31 != K.one or g ** 4 != K.one


def test_poly_roots_recovers_roots():
    F = make_fp2(103)
    rng = random.Random(1)
    rs = sorted({F.random(rng) for _ in range(6)})
    assert sorted(poly_roots(poly_from_roots(rs, F))) == rs
