import random

import pytest
from hypothesis import given, settings, strategies as st

from isg.acceptance import load_cgl_vectors
from isg.curve import Point, canonical_model, two_torsion
from isg.errors import ParameterError, StateCorruptionError
from isg.ff import make_fp2
from isg.proto import (WalkState, bits_from_hex, cgl_hash, cgl_init, cgl_step, cgl_walk,
                       iso_scale, shared_is_supersingular, sidh_direct, sidh_exchange,
                       sidh_setup)
from isg.ssgraph import build_graph, enumerate_ss

VECTORS = load_cgl_vectors()["vectors"]
bitstrings = st.text(alphabet="01", max_size=24)


@pytest.mark.parametrize("v", VECTORS, ids=lambda v: v["bits"] or "empty")
def test_hash_matches_frozen_vectors(v):
    st_ = cgl_init(101)
    trace = [str(st_.j)]
    for b in v["bits"]:
        st_ = cgl_step(st_, b)
        trace.append(str(st_.j))
    assert trace == v["trace"]
    assert str(cgl_hash(101, v["bits"])) == v["j"]


def test_start_is_the_least_two_torsion_point():
    s = cgl_init(101)
    assert s.j == 0 and s.steps == 0
    assert s.point == min(two_torsion(s.curve), key=lambda P: P.x.key())


@settings(max_examples=40, deadline=None)
@given(bitstrings, bitstrings)
def test_walk_resumes(a, b):
    mid = cgl_walk(cgl_init(101), a)
    end = cgl_walk(mid, b)
    assert end == cgl_walk(cgl_init(101), a + b)
    assert end.steps == len(a) + len(b)


@settings(max_examples=30, deadline=None)
@given(bitstrings)
def test_each_step_follows_a_graph_edge(bits):
    g = build_graph(101, 2)
    s = cgl_init(101)
    for b in bits:
        nxt = cgl_step(s, b)
        assert g.adjacency[g.index(s.j)][g.index(nxt.j)] > 0
        assert nxt.curve == canonical_model(nxt.j)
        s = nxt


def test_bits_from_hex():
    assert bits_from_hex("a5") == "10100101"
    assert bits_from_hex("0F") == "00001111"
    assert cgl_hash(101, bits_from_hex("a5")) == cgl_hash(101, "10100101")
    with pytest.raises(ParameterError):
        bits_from_hex("xyz")


def test_bad_input():
    with pytest.raises(ParameterError):
        cgl_hash(101, "012")
    s = cgl_init(101)
    with pytest.raises(StateCorruptionError):
        cgl_step(WalkState(s.curve, s.curve.zero), 0)
    other = [T for T in two_torsion(s.curve) if T != s.point][0]
    bad = Point(s.curve, other.x + 1, other.y)
    with pytest.raises(StateCorruptionError):
        cgl_step(WalkState(s.curve, bad), 1)


def test_hash_is_a_supersingular_j():
    js = set(enumerate_ss(101)[0])
    rng = random.Random(0)
    for _ in range(10):
        bits = "".join(rng.choice("01") for _ in range(rng.randrange(1, 40)))
        assert cgl_hash(101, bits) in js


def test_iso_scale_maps_models():
    F = make_fp2(103)
    E = canonical_model(F(1728))
    u = F(5)
    E2 = type(E)(E.a * u * u, E.b * u ** 3)
    w = iso_scale(E, E2)
    assert w * w * E.a == E2.a


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_sidh_shared_secret(seed):
    s = sidh_setup(2, 4, 3, 3, seed)
    assert s.p == 431
    rng = random.Random(seed)
    a = (rng.randrange(1, 16, 2), rng.randrange(16))
    b = (rng.randrange(27), rng.choice([1, 2, 4, 5]))
    ja, jb = sidh_exchange(s, a, b)
    assert ja == jb == sidh_direct(s, a, b)
    assert shared_is_supersingular(s, ja)


def test_sidh_setup_is_deterministic():
    assert sidh_setup(2, 3, 3, 2, 5) == sidh_setup(2, 3, 3, 2, 5)


def test_sidh_rejects():
    with pytest.raises(ParameterError):
        sidh_setup(2, 4, 2, 3)
    s = sidh_setup(2, 4, 3, 3, 0)
    with pytest.raises(ParameterError):
        sidh_exchange(s, (2, 4), (1, 1))
