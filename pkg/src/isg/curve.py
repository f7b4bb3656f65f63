"""Short Weierstrass curves y^2 = x^3 + ax + b over F_{p^m}, p > 3.

Includes the group law, point counting, supersingularity tests, canonical
models with Frobenius^2 = [-p], torsion over extension fields and Velu
isogenies.
"""

import random
from functools import lru_cache
from math import comb

from .errors import (CapacityError, InternalError, NotSupersingularError,
                     ParameterError)
from .ff import (FieldElem, make_ext, make_fp2, poly_add, poly_deriv,
                 poly_eval, poly_from_roots, poly_gcd, poly_mod, poly_monic,
                 poly_mul, poly_powmod, poly_roots, poly_scale, poly_sub, sqrt)

COUNT_LIMIT = 10 ** 7
TORSION_TRIALS = 10 ** 4


class Curve:
    __slots__ = ("a", "b", "ctx")

    def __init__(self, a, b):
        if not isinstance(a, FieldElem):
            a = b.ctx(a)
        if not isinstance(b, FieldElem):
            b = a.ctx(b)
        if a.ctx is not b.ctx:
            raise ParameterError("curve coefficients from different fields")
        if a.ctx.p <= 3:
            raise ParameterError("short Weierstrass models need p > 3")
        if not (4 * a ** 3 + 27 * b * b):
            raise ParameterError("singular curve: 4a^3 + 27b^2 = 0")
        self.a, self.b, self.ctx = a, b, a.ctx

    def __eq__(self, other):
        return isinstance(other, Curve) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return "Curve(y^2 = x^3 + (%s)x + (%s))" % (self.a, self.b)

    def j_invariant(self):
        return j_invariant(self)

    def rhs(self, x):
        return (x * x + self.a) * x + self.b

    @property
    def zero(self):
        return Point(self, None, None)

    def point(self, x, y):
        x, y = self.ctx(x), self.ctx(y)
        if y * y != self.rhs(x):
            raise ParameterError("(%s, %s) is not on %r" % (x, y, self))
        return Point(self, x, y)

    def lift_x(self, x):
        """Some point with the given x, or None."""
        y = sqrt(self.rhs(x))
        return None if y is None else Point(self, x, y)

    def random_point(self, rng):
        while True:
            x = self.ctx.random(rng)
            y = sqrt(self.rhs(x))
            if y is not None:
                if rng.random() < 0.5:
                    y = -y
                return Point(self, x, y)

    def twist(self, d):
        return Curve(self.a * d * d, self.b * d * d * d)

    def lift(self, emb):
        return Curve(emb(self.a), emb(self.b))

    def key(self):
        return (self.a.key(), self.b.key())

    def to_dict(self):
        return {"p": self.ctx.p, "a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_dict(cls, d, ctx=None):
        ctx = ctx or make_fp2(d["p"])
        return cls(ctx.parse(d["a"]), ctx.parse(d["b"]))


class Point:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x, y):
        self.curve, self.x, self.y = curve, x, y

    def is_zero(self):
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        if self.x is None:
            return "Point(0)"
        return "Point(%s, %s)" % (self.x, self.y)

    def __neg__(self):
        if self.x is None:
            return self
        return Point(self.curve, self.x, -self.y)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __rmul__(self, n):
        return scalar_mul(n, self)

    def key(self):
        if self.x is None:
            return ((), ())
        return (self.x.key(), self.y.key())


def j_invariant(E: Curve) -> FieldElem:
    a3 = 4 * E.a ** 3
    return 1728 * a3 / (a3 + 27 * E.b * E.b)


def curve_from_j(j: FieldElem) -> Curve:
    """A short model with the given j-invariant."""
    ctx = j.ctx
    if j == 0:
        return Curve(ctx.zero, ctx.one)
    if j == 1728:
        return Curve(ctx.one, ctx.zero)
    # y^2 + xy = x^3 + a4 x + a6, then complete the square and shift
    t = (j - 1728).inverse()
    a4 = -36 * t
    a6 = -t
    c4 = 1 - 48 * a4
    c6 = -1 + 72 * a4 - 864 * a6
    E = Curve(-27 * c4, -54 * c6)
    if E.j_invariant() != j:
        raise InternalError("curve_from_j round trip failed for j = %s" % j)
    return E


# --- group law --------------------------------------------------------------

def add(P: Point, Q: Point) -> Point:
    if P.curve != Q.curve:
        raise ParameterError("points on different curves")
    if P.x is None:
        return Q
    if Q.x is None:
        return P
    E = P.curve
    if P.x == Q.x:
        if P.y != Q.y or not P.y:
            return E.zero
        lam = (3 * P.x * P.x + E.a) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    return Point(E, x3, lam * (P.x - x3) - P.y)


def scalar_mul(n: int, P: Point) -> Point:
    """Double-and-add in Jacobian coordinates; n may be negative."""
    if n < 0:
        n, P = -n, -P
    if n == 0 or P.x is None:
        return P.curve.zero
    return _jacobian_mul(n, P)


def _jacobian_mul(n, P):
    E = P.curve
    a = E.a
    one = E.ctx.one
    x2, y2 = P.x, P.y
    X, Y, Z = x2, y2, one
    inf = False
    for bit in bin(n)[3:]:
        if not inf:
            if not Y:
                inf = True
            else:
                YY = Y * Y
                ZZ = Z * Z
                S = 4 * X * YY
                M = 3 * X * X + a * ZZ * ZZ
                X3 = M * M - 2 * S
                Z = 2 * Y * Z
                Y = M * (S - X3) - 8 * YY * YY
                X = X3
        if bit == "1":
            if inf:
                X, Y, Z, inf = x2, y2, one, False
                continue
            ZZ = Z * Z
            U2 = x2 * ZZ
            S2 = y2 * ZZ * Z
            H = U2 - X
            r = S2 - Y
            if not H:
                if r:
                    inf = True
                    continue
                # P + P: double the affine base point
                if not y2:
                    inf = True
                    continue
                D = _jacobian_mul(2, P)
                if D.x is None:
                    inf = True
                    continue
                X, Y, Z = D.x, D.y, one
                continue
            HH = H * H
            HHH = HH * H
            V = X * HH
            X3 = r * r - HHH - 2 * V
            Y = r * (V - X3) - Y * HHH
            Z = Z * H
            X = X3
    if inf:
        return E.zero
    zi = Z.inverse()
    zi2 = zi * zi
    return Point(E, X * zi2, Y * zi2 * zi)


def point_order(P: Point, cap: int = 10 ** 6) -> int:
    """Smallest n > 0 with nP = 0, by repeated addition (small orders only)."""
    Q, n = P, 1
    while not Q.is_zero():
        Q = Q + P
        n += 1
        if n > cap:
            raise CapacityError("point order exceeds %d" % cap)
    return n


# --- counting and supersingularity -----------------------------------------

def count_points(E: Curve, ctx=None) -> int:
    """#E(F_q) including infinity, by a sweep with the quadratic character."""
    if ctx is not None and ctx is not E.ctx:
        if not (E.a.is_prime_subfield() and E.b.is_prime_subfield()):
            raise ParameterError("can only move curves with prime-field coefficients")
        E = Curve(ctx(E.a.to_int()), ctx(E.b.to_int()))
    ctx = E.ctx
    if ctx.q > COUNT_LIMIT:
        raise CapacityError("field of size %d is too large to sweep" % ctx.q)
    if ctx.m <= 2:
        return _count_numpy(E)
    total = 1
    for x in ctx.elements():
        v = E.rhs(x)
        total += 1 if not v else (2 if v.is_square() else 0)
    return total


def _count_numpy(E):
    import numpy as np

    ctx = E.ctx
    p = ctx.p
    chi = np.full(p, -1, dtype=np.int64)
    sq = (np.arange(p, dtype=np.int64) ** 2) % p
    chi[sq] = 1
    chi[0] = 0
    if ctx.m == 1:
        x = np.arange(p, dtype=np.int64)
        f = ((x * x % p) * x + E.a.c[0] * x + E.b.c[0]) % p
        return int(p + 1 + chi[f].sum())
    c0, c1 = ctx.modulus[0], ctx.modulus[1]
    idx = np.arange(p * p, dtype=np.int64)
    x0, x1 = idx % p, idx // p

    def mul(a0, a1, b0, b1):
        t2 = a1 * b1 % p
        return (a0 * b0 - c0 * t2) % p, (a0 * b1 + a1 * b0 - c1 * t2) % p

    s0, s1 = mul(x0, x1, x0, x1)
    s0 = (s0 + E.a.c[0]) % p
    s1 = (s1 + E.a.c[1]) % p
    f0, f1 = mul(s0, s1, x0, x1)
    f0 = (f0 + E.b.c[0]) % p
    f1 = (f1 + E.b.c[1]) % p
    nrm = (f0 * f0 - (c1 * f0 % p) * f1 + (c0 * f1 % p) * f1) % p
    return int(p * p + 1 + chi[nrm].sum())


@lru_cache(maxsize=None)
def hp_coefficients(p: int) -> tuple:
    """H_p(t) = sum_i binom(m, i)^2 t^i mod p with m = (p-1)/2, low degree first."""
    m = (p - 1) // 2
    return tuple(comb(m, i) ** 2 % p for i in range(m + 1))


def j_from_lambda(lam: FieldElem) -> FieldElem:
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


def _lambda_sextic(j):
    ctx = j.ctx
    return [ctx(c) for c in (256, -768, 1536 - j, -1792 + 2 * j, 1536 - j, -768, 256)]


def lambda_values(j: FieldElem) -> list:
    """Legendre parameters over F_{p^2}: roots of 2^8(l^2-l+1)^3 - j l^2(l-1)^2."""
    return poly_roots(_lambda_sextic(_to_fp2(j)))


def hp_criterion(j: FieldElem) -> bool:
    """True iff some Legendre parameter of j in F_{p^2} is a root of H_p."""
    j = _to_fp2(j)
    ctx = j.ctx
    sextic = poly_monic(_lambda_sextic(j))
    x = [ctx.zero, ctx.one]
    g = poly_gcd(sextic, poly_sub(poly_powmod(x, ctx.q, sextic), x))
    if len(g) <= 1:
        return False
    hp = [ctx(c) for c in hp_coefficients(ctx.p)]
    return len(poly_gcd(g, poly_mod(hp, g))) > 1


def _to_fp2(x):
    if x.ctx.m == 2:
        return x
    if x.ctx.m == 1:
        return make_fp2(x.ctx.p)(x.c[0])
    raise ParameterError("expected an element of F_p or F_{p^2}")


def is_supersingular(E: Curve) -> bool:
    """Legendre-form criterion cross-checked against the trace over F_{p^2}."""
    p = E.ctx.p
    if E.ctx.m == 1:
        E = Curve(make_fp2(p)(E.a.c[0]), make_fp2(p)(E.b.c[0]))
    elif E.ctx.m != 2:
        raise ParameterError("is_supersingular expects a curve over F_p or F_{p^2}")
    by_lambda = hp_criterion(E.j_invariant())
    trace = p * p + 1 - count_points(E)
    by_trace = trace % p == 0
    if by_lambda != by_trace:
        raise InternalError("supersingularity criteria disagree for %r" % (E,))
    return by_lambda


def _annihilates(E, n, rng, trials=2):
    for _ in range(trials):
        while True:
            P = E.random_point(rng)
            if P.y:
                break
        if not scalar_mul(n, P).is_zero():
            return False
    return True


def canonical_model(j: FieldElem, seed: int = 0) -> Curve:
    """The model with (p+1)^2 points over F_{p^2} and smallest (a, b)."""
    j = _to_fp2(j)
    return _canonical_model(j.ctx.p, j.c)


@lru_cache(maxsize=4096)
def _canonical_model(p, jc):
    ctx = make_fp2(p)
    j = ctx(list(jc))
    if not hp_criterion(j):
        raise NotSupersingularError("j = %s is not supersingular mod %d" % (j, p))
    E0 = curve_from_j(j)
    rng = random.Random(p)
    if _annihilates(E0, p + 1, rng):
        squares = True
    elif _annihilates(E0.twist(ctx.nonresidue()), p + 1, rng):
        squares = False
    else:
        raise NotSupersingularError("no twist of j = %s has (p+1)^2 points" % j)
    a, b = E0.a, E0.b
    if a:
        # a*d^2 with d in the admissible square class: a quartic-character coset
        e = _least_in_coset(ctx, a, 4, 1 if squares else -1)
        d = sqrt(e / a)
        b1 = b * d * d * d
        nb = -b1
        return Curve(e, b1 if b1.key() <= nb.key() else nb)
    # j = 0: b*d^3 ranges over a sextic-character coset
    return Curve(ctx.zero, _least_in_coset(ctx, b, 6, 1 if squares else -1))


def _least_in_coset(ctx, base, n, target):
    """Canonically least e with (e/base)^((q-1)/n) = target."""
    e_n = (ctx.q - 1) // n
    want = ctx(target) * base ** e_n
    g = ctx(primitive_root(ctx.p))
    t = g ** e_n
    image, x = {ctx.one}, t
    while x != 1:
        image.add(x)
        x = x * t
    i = 1 if want in image else ctx.p
    while True:
        e = ctx.from_index(i)
        if e ** e_n == want:
            return e
        i += 1


def primitive_root(p: int) -> int:
    from .ff import prime_factors
    qs = prime_factors(p - 1)
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in qs):
        g += 1
    return g


def has_frobenius_minus_p(E: Curve, seed: int = 0) -> bool:
    """Probabilistic certificate that (p+1) kills E(F_{p^2})."""
    return _annihilates(E, E.ctx.p + 1, random.Random(seed), trials=4)


# --- torsion ----------------------------------------------------------------

def two_torsion(E: Curve) -> list:
    ctx = E.ctx
    roots = poly_roots([E.b, E.a, ctx.zero, ctx.one])
    if len(roots) != 3:
        raise ParameterError("2-torsion of %r is not rational over the base field" % (E,))
    return [Point(E, r, ctx.zero) for r in roots]


class Embedding:
    """F_p[u]/(g) -> F_p[t]/(h) sending u to a fixed root of g."""

    def __init__(self, src, dst):
        self.src, self.dst = src, dst
        if src is dst or src.m == 1:
            self.r = dst.gen if src is dst else None
            return
        if src.m != 2 or dst.m % 2:
            raise ParameterError("only F_{p^2} -> F_{p^2k} embeddings are supported")
        c0, c1 = src.modulus[0], src.modulus[1]
        disc = dst(c1 * c1 - 4 * c0)
        s = sqrt(disc)
        if s is None:
            raise InternalError("no root of the F_{p^2} modulus in the extension")
        self.r = (s - c1) / 2
        self._col = next(i for i in range(1, dst.m) if self.r.c[i])

    def __call__(self, x):
        if self.src is self.dst:
            return x
        if self.src.m == 1:
            return self.dst(x.c[0])
        return self.dst(x.c[0]) + self.r * x.c[1]

    def back(self, z):
        if self.src is self.dst:
            return z
        p = self.src.p
        if self.src.m == 1:
            if any(z.c[1:]):
                raise ParameterError("element is not in the prime field")
            return self.src(z.c[0])
        b = z.c[self._col] * pow(self.r.c[self._col], -1, p) % p
        a = (z.c[0] - b * self.r.c[0]) % p
        if self.dst(a) + self.r * b != z:
            raise ParameterError("element does not lie in the image of F_{p^2}")
        return self.src([a, b])


@lru_cache(maxsize=None)
def _embedding(p, src_mod, k):
    src = make_fp2(p)
    if k == 1:
        return Embedding(src, src)
    return Embedding(src, make_ext(p, 2 * k))


def minus_p_order(p: int, ell: int) -> int:
    """Multiplicative order of -p mod ell."""
    g = (-p) % ell
    if g == 0:
        raise ParameterError("ell must differ from p")
    k, x = 1, g
    while x != 1:
        x = x * g % ell
        k += 1
    return k


def torsion_basis(E: Curve, ell: int, seed: int = 0):
    """(E_ext, emb, P, Q) with P, Q a basis of E[ell] over F_{p^{2k}}."""
    ctx = E.ctx
    p = ctx.p
    if ctx.m != 2:
        raise ParameterError("torsion_basis expects a curve over F_{p^2}")
    if ell == p or ell < 3 or ell > 13 or ell % 2 == 0:
        raise ParameterError("ell must be an odd prime <= 13 different from p")
    k = minus_p_order(p, ell)
    emb = _embedding(p, ctx.modulus, k)
    El = E.lift(emb)
    N = (p ** k - (-1) ** k) ** 2
    cof = N
    while cof % ell == 0:
        cof //= ell
    rng = random.Random((seed, p, ell, E.key()).__repr__())
    basis = []
    span = None
    for _ in range(TORSION_TRIALS):
        T = scalar_mul(cof, El.random_point(rng))
        if T.is_zero():
            continue
        T2 = scalar_mul(ell, T)
        while not T2.is_zero():
            T, T2 = T2, scalar_mul(ell, T2)
        if not basis:
            basis.append(T)
            span = {m * T for m in range(ell)}
        elif T not in span:
            basis.append(T)
            return El, emb, basis[0], basis[1]
    raise InternalError("torsion sampling exhausted after %d trials" % TORSION_TRIALS)


def torsion_points(E: Curve, ell: int, seed: int = 0) -> list:
    """All ell^2 points of E[ell], over the smallest field carrying them."""
    El, emb, P, Q = torsion_basis(E, ell, seed)
    pts = []
    for i in range(ell):
        iP = scalar_mul(i, P)
        for jj in range(ell):
            pts.append(iP + scalar_mul(jj, Q))
    return sorted(pts, key=Point.key)


# --- kernels and Velu -------------------------------------------------------

class Kernel:
    """A subgroup of prime order ell: its kernel polynomial over the base field
    and a generator (possibly over an extension reached through emb)."""

    __slots__ = ("degree", "poly", "generator", "emb")

    def __init__(self, degree, poly, generator=None, emb=None):
        self.degree, self.poly, self.generator, self.emb = degree, poly, generator, emb

    def key(self):
        return tuple(c.key() for c in reversed(self.poly))

    def __repr__(self):
        return "Kernel(degree=%d, poly=%s)" % (self.degree, [str(c) for c in self.poly])


def subgroups_of_order(E: Curve, ell: int, seed: int = 0) -> list:
    if ell == 2:
        return [Kernel(2, [-T.x, E.ctx.one], T, None) for T in two_torsion(E)]
    El, emb, P, Q = torsion_basis(E, ell, seed)
    gens = [P] + [Q + scalar_mul(m, P) for m in range(ell)]
    out = []
    for G in gens:
        xs, T = [], G
        for _ in range((ell - 1) // 2):
            xs.append(T.x)
            T = T + G
        D = poly_from_roots(xs, El.ctx)
        out.append(Kernel(ell, [emb.back(c) for c in D], G, emb))
    return sorted(out, key=Kernel.key)


class Isogeny:
    """Separable isogeny given by Velu's rational maps.

    x maps to xnum(x)/xden(x) and y to y * ynum(x)/yden(x)."""

    def __init__(self, domain, codomain, degree, kernel_poly, xnum, xden, ynum, yden):
        self.domain, self.codomain, self.degree = domain, codomain, degree
        self.kernel_poly = kernel_poly
        self.xnum, self.xden, self.ynum, self.yden = xnum, xden, ynum, yden

    def __repr__(self):
        return "Isogeny(degree %d, %r -> %r)" % (self.degree, self.domain, self.codomain)

    def kernel_x(self):
        return poly_roots(self.kernel_poly)

    def __call__(self, P: Point, emb=None):
        if P.x is None:
            target = self.codomain if emb is None else self.codomain.lift(emb)
            return target.zero
        lift = (lambda c: c) if emb is None else emb
        target = self.codomain if emb is None else self.codomain.lift(emb)

        def ev(poly, x):
            acc = x.ctx.zero
            for c in reversed(poly):
                acc = acc * x + lift(c)
            return acc

        dx = ev(self.xden, P.x)
        if not dx:
            return target.zero
        X = ev(self.xnum, P.x) / dx
        Y = P.y * ev(self.ynum, P.x) / ev(self.yden, P.x)
        return Point(target, X, Y)

    def to_dict(self):
        return {"domain": self.domain.to_dict(), "codomain": self.codomain.to_dict(),
                "degree": self.degree, "kernel_x": [str(x) for x in self.kernel_x()],
                "kernel_poly": [str(c) for c in self.kernel_poly]}


def velu(E: Curve, kernel, ell: int = None) -> Isogeny:
    """Quotient of E by a subgroup of prime order.

    kernel may be a Kernel (as returned by subgroups_of_order) or a Point of
    prime order on E itself; ell is inferred when not given."""
    ctx = E.ctx
    if isinstance(kernel, Point):
        G = kernel
        if G.curve != E or G.is_zero():
            raise ParameterError("kernel generator is not a nonzero point of E")
        if G.y * G.y != E.rhs(G.x):
            raise ParameterError("kernel generator is not on E")
        if ell is None:
            ell = point_order(G, cap=10 ** 4)
        if not scalar_mul(ell, G).is_zero():
            raise ParameterError("kernel generator does not have order %d" % ell)
        xs, T = [], G
        for _ in range(max(1, (ell - 1) // 2)):
            xs.append(T.x)
            T = T + G
        return _velu_poly(E, poly_from_roots(xs, ctx), ell)
    if not isinstance(kernel, Kernel):
        raise ParameterError("unsupported kernel description")
    ell = kernel.degree
    D = kernel.poly
    if any(c.ctx is not ctx for c in D):
        raise ParameterError("kernel polynomial is not over the curve's field")
    if ell == 2:
        if len(D) != 2 or E.rhs(-D[0]):
            raise ParameterError("kernel is not a 2-torsion point of E")
    else:
        G, emb = kernel.generator, kernel.emb
        if G is None or emb is None:
            raise ParameterError("odd-degree kernels need a generator")
        El = E.lift(emb)
        if G.curve != El or G.is_zero() or G.y * G.y != El.rhs(G.x):
            raise ParameterError("kernel generator is not on E")
        if not scalar_mul(ell, G).is_zero():
            raise ParameterError("kernel generator has the wrong order")
        if poly_eval([emb(c) for c in D], G.x):
            raise ParameterError("kernel polynomial does not vanish at the generator")
    return _velu_poly(E, D, ell)


def _velu_poly(E, D, ell):
    ctx = E.ctx
    a, b = E.a, E.b
    zero, one = ctx.zero, ctx.one
    if ell == 2:
        alpha = -D[0]
        v = 3 * alpha * alpha + a
        w = alpha * v
        xnum = [v, -alpha, one]
        xden = [-alpha, one]
    else:
        d = len(D) - 1
        s1 = -D[d - 1]
        s2 = D[d - 2] if d >= 2 else zero
        s3 = -D[d - 3] if d >= 3 else zero
        p1 = s1
        p2 = s1 * s1 - 2 * s2
        p3 = s1 ** 3 - 3 * s1 * s2 + 3 * s3
        v = 6 * p2 + 2 * a * d
        w = 10 * p3 + 6 * a * p1 + 4 * b * d
        D1 = poly_deriv(D)
        D2 = poly_deriv(D1)
        DD = poly_mul(D, D)
        f = [b, a, zero, one]
        t1 = poly_mul([-2 * p1, ctx(ell)], DD)
        t2 = poly_scale(poly_mul(poly_mul([2 * a, zero, ctx(6)], D1), D), -1)
        t3 = poly_scale(poly_mul(f, poly_sub(poly_mul(D1, D1), poly_mul(D, D2))), ctx(4))
        xnum = poly_add(poly_add(t1, t2), t3)
        xden = DD
    Ea = Curve(a - 5 * v, b - 7 * w)
    ynum = poly_sub(poly_mul(poly_deriv(xnum), xden), poly_mul(xnum, poly_deriv(xden)))
    yden = poly_mul(xden, xden)
    return Isogeny(E, Ea, ell, list(D), xnum, xden, ynum, yden)
