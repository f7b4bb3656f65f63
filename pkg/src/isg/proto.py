"""CGL hash walks on G(p, 2) and a toy SIDH key exchange."""

import random
from dataclasses import dataclass
from functools import lru_cache

from .curve import (Curve, Point, canonical_model, is_supersingular, scalar_mul, two_torsion,
                    velu)
from .errors import ParameterError, StateCorruptionError
from .ff import FieldElem, is_prime, poly_roots
from .ssgraph import seed_ss_j

SIDH_MAX_F = 20


# --- CGL -------------------------------------------------------------------

@dataclass(frozen=True)
class WalkState:
    curve: Curve
    point: Point       # 2-torsion point marking the way back
    steps: int = 0

    @property
    def j(self):
        return self.curve.j_invariant()


def _by_x(points):
    return sorted(points, key=lambda P: P.x.key())


def cgl_init(p: int) -> WalkState:
    E = canonical_model(seed_ss_j(p))
    return WalkState(E, _by_x(two_torsion(E))[0], 0)


def iso_scale(src: Curve, dst: Curve) -> FieldElem:
    """Least u with u^2 a_src = a_dst and u^3 b_src = b_dst, so (x, y) -> (u x, ..) maps src to dst.

    Away from j = 0, 1728 u is unique; there the choice among the
    automorphism-related candidates is the least in field order."""
    if src.j_invariant() != dst.j_invariant():
        raise ParameterError("curves are not isomorphic")
    ctx = src.ctx
    if src.a and src.b:
        cands = [(dst.b / src.b) / (dst.a / src.a)]
    elif src.b:
        cands = poly_roots([-(dst.b / src.b), ctx.zero, ctx.zero, ctx.one])
    else:
        cands = poly_roots([-(dst.a / src.a), ctx.zero, ctx.one])
    cands = [u for u in cands if u * u * src.a == dst.a and u ** 3 * src.b == dst.b]
    if not cands:
        raise ParameterError("no isomorphism over the base field")
    return min(cands)


def cgl_step(state: WalkState, bit) -> WalkState:
    E, P = state.curve, state.point
    if P.is_zero() or P.curve != E or P.y or E.rhs(P.x):
        raise StateCorruptionError("marked point is not a 2-torsion point of the current curve")
    bit = int(bit)
    if bit not in (0, 1):
        raise ParameterError("bits must be 0 or 1")
    Ec, x = _step(E, P, bit)
    return WalkState(Ec, Point(Ec, x, Ec.ctx.zero), state.steps + 1)


@lru_cache(maxsize=1 << 16)
def _step(E, P, bit):
    # a walk only ever visits 3h (curve, marked point) pairs, so memoizing pays off
    others = _by_x(T for T in two_torsion(E) if T != P)
    phi = velu(E, others[bit])
    X = phi(P)
    Ec = canonical_model(phi.codomain.j_invariant())
    return Ec, iso_scale(phi.codomain, Ec) * X.x


def parse_bits(bits):
    if isinstance(bits, str):
        if any(ch not in "01" for ch in bits):
            raise ParameterError("message must be a string of 0 and 1")
        return [int(ch) for ch in bits]
    return [int(b) for b in bits]


def bits_from_hex(hexstr: str) -> str:
    """Big-endian bit expansion, 4 bits per hex digit."""
    try:
        return "".join(format(int(ch, 16), "04b") for ch in hexstr)
    except ValueError:
        raise ParameterError("not a hex string: %r" % hexstr) from None


def cgl_walk(state: WalkState, bits) -> WalkState:
    for b in parse_bits(bits):
        state = cgl_step(state, b)
    return state


def cgl_hash(p: int, bits) -> FieldElem:
    return cgl_walk(cgl_init(p), bits).j


# --- SIDH ------------------------------------------------------------------

@dataclass(frozen=True)
class SidhParams:
    p: int
    la: int
    ra: int
    lb: int
    rb: int
    f: int
    E: Curve
    PA: Point
    QA: Point
    PB: Point
    QB: Point
    seed: int = 0


def _has_exact_order(P, ell, r):
    return scalar_mul(ell ** r, P).is_zero() and not scalar_mul(ell ** (r - 1), P).is_zero()


def _basis(E, ell, r, cof, rng):
    n = ell ** r
    P = None
    while True:
        R = scalar_mul(cof, E.random_point(rng))
        if not _has_exact_order(R, ell, r):
            continue
        if P is None:
            P = R
            continue
        # bases reduce to a basis of E[ell]
        p1, q1 = scalar_mul(n // ell, P), scalar_mul(n // ell, R)
        if all(scalar_mul(k, p1) != q1 for k in range(ell)):
            return P, R


def sidh_setup(la, ra, lb, rb, seed=0) -> SidhParams:
    if la == lb or not (is_prime(la) and is_prime(lb)) or ra < 1 or rb < 1:
        raise ParameterError("need two distinct primes and positive exponents")
    base = la ** ra * lb ** rb
    f = next((f for f in range(1, SIDH_MAX_F + 1) if is_prime(base * f - 1)), None)
    if f is None or base * f - 1 < 5:
        raise ParameterError("no cofactor f <= %d makes a usable prime" % SIDH_MAX_F)
    p = base * f - 1
    E = canonical_model(seed_ss_j(p))
    rng = random.Random(seed)
    PA, QA = _basis(E, la, ra, (p + 1) // la ** ra, rng)
    PB, QB = _basis(E, lb, rb, (p + 1) // lb ** rb, rng)
    return SidhParams(p, la, ra, lb, rb, f, E, PA, QA, PB, QB, seed)


def chain(E, K, factors, carry=()):
    """Quotient of E by the cyclic group <K> of order prod(factors), one prime step at a time.

    Returns (codomain, images of the carried points)."""
    n = 1
    for ell in factors:
        n *= ell
    if scalar_mul(n, K).x is not None:
        raise ParameterError("kernel generator has the wrong order")
    carry = list(carry)
    for ell in factors:
        G = scalar_mul(n // ell, K)
        if G.is_zero():
            raise ParameterError("kernel generator has the wrong order")
        phi = velu(E, G, ell)
        E = phi.codomain
        K = phi(K)
        carry = [phi(P) for P in carry]
        n //= ell
    return E, carry


def _kernel(P, Q, m, n, ell, r):
    if m % ell == 0 and n % ell == 0:
        raise ParameterError("secret scalars must not both be divisible by %d" % ell)
    K = scalar_mul(m, P) + scalar_mul(n, Q)
    if not _has_exact_order(K, ell, r):
        raise ParameterError("kernel generator does not have order %d^%d" % (ell, r))
    return K


def sidh_exchange(params: SidhParams, secret_a, secret_b):
    """Run both sides of the exchange; returns (j seen by Alice, j seen by Bob)."""
    s = params
    ma, na = secret_a
    mb, nb = secret_b
    KA = _kernel(s.PA, s.QA, ma, na, s.la, s.ra)
    KB = _kernel(s.PB, s.QB, mb, nb, s.lb, s.rb)
    EA, (PBt, QBt) = chain(s.E, KA, [s.la] * s.ra, (s.PB, s.QB))
    EB, (PAt, QAt) = chain(s.E, KB, [s.lb] * s.rb, (s.PA, s.QA))
    KAt = _kernel(PAt, QAt, ma, na, s.la, s.ra)
    KBt = _kernel(PBt, QBt, mb, nb, s.lb, s.rb)
    EBA, _ = chain(EB, KAt, [s.la] * s.ra)
    EAB, _ = chain(EA, KBt, [s.lb] * s.rb)
    return EBA.j_invariant(), EAB.j_invariant()


def sidh_direct(params: SidhParams, secret_a, secret_b):
    """j(E/(H_A + H_B)) from the joint cyclic kernel, Bob's primes first."""
    s = params
    KA = _kernel(s.PA, s.QA, secret_a[0], secret_a[1], s.la, s.ra)
    KB = _kernel(s.PB, s.QB, secret_b[0], secret_b[1], s.lb, s.rb)
    E, _ = chain(s.E, KA + KB, [s.lb] * s.rb + [s.la] * s.ra)
    return E.j_invariant()


def shared_is_supersingular(params, j):
    from .curve import curve_from_j
    return is_supersingular(curve_from_j(j))
