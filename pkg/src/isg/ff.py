"""Finite fields F_p, F_{p^2} and F_{p^m} with a canonical total order.

Elements are immutable and carry a reference to their FieldCtx.  Contexts are
interned on (p, modulus), so two calls with the same arguments hand back the
same object and elements from them may be mixed freely.
"""

import random
from functools import lru_cache

from .errors import InternalError, ParameterError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with a fixed base set (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def prime_factors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- integer polynomials mod p (coefficient lists, low degree first) -------

def _itrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _imul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _itrim([c % p for c in out])


def _imod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    for k in range(len(a) - 1, df - 1, -1):
        t = a[k] * inv % p
        if t:
            for i in range(df + 1):
                a[k - df + i] = (a[k - df + i] - t * f[i]) % p
    return _itrim(a[:df])


def _igcd(a, b, p):
    a, b = _itrim(list(a)), _itrim(list(b))
    while b:
        a, b = b, _imod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ipowmod(base, e, f, p):
    result, base = [1], _imod(base, f, p)
    while e:
        if e & 1:
            result = _imod(_imul(result, base, p), f, p)
        e >>= 1
        if e:
            base = _imod(_imul(base, base, p), f, p)
    return result


def _isub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _itrim([(x - y) % p for x, y in zip(a, b)])


def _ixgcd(a, b, p):
    """Return (g, s) with s*a = g mod b, g monic."""
    r0, r1 = _itrim(list(a)), _itrim(list(b))
    s0, s1 = [1], []
    while r1:
        q, r = _idivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _isub(s0, _imul(q, s1, p), p)
    inv = pow(r0[-1], -1, p)
    return [c * inv % p for c in r0], [c * inv % p for c in s0]


def _idivmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    if len(a) - 1 < df:
        return [], _itrim(a)
    inv = pow(f[-1], -1, p)
    q = [0] * (len(a) - df)
    for k in range(len(a) - 1, df - 1, -1):
        t = a[k] * inv % p
        q[k - df] = t
        if t:
            for i in range(df + 1):
                a[k - df + i] = (a[k - df + i] - t * f[i]) % p
    return _itrim(q), _itrim(a[:df])


def is_irreducible_mod_p(f, p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if _isub(_ipowmod(x, p ** m, f, p), x, p):
        return False
    for r in prime_factors(m):
        h = _isub(_ipowmod(x, p ** (m // r), f, p), x, p)
        if len(_igcd(f, h, p)) > 1:
            return False
    return True


# --- contexts ---------------------------------------------------------------

_CTX = {}


class FieldCtx:
    """F_{p^m} presented as F_p[u]/(modulus)."""

    __slots__ = ("p", "m", "modulus", "q", "_nonres", "_frob_u", "__weakref__")

    def __new__(cls, p, modulus):
        key = (p, tuple(modulus))
        ctx = _CTX.get(key)
        if ctx is None:
            ctx = object.__new__(cls)
            ctx.p = p
            ctx.modulus = tuple(modulus)
            ctx.m = len(modulus) - 1
            ctx.q = p ** ctx.m
            ctx._nonres = None
            ctx._frob_u = None
            _CTX[key] = ctx
        return ctx

    def __repr__(self):
        return "FieldCtx(p=%d, modulus=%s)" % (self.p, self.modulus_text())

    def __reduce__(self):
        return (FieldCtx, (self.p, self.modulus))

    def modulus_text(self, var="u"):
        return poly_text(self.modulus, var)

    def __call__(self, v):
        if isinstance(v, FieldElem):
            if v.ctx is not self:
                raise ParameterError("element belongs to another field")
            return v
        if isinstance(v, int):
            return FieldElem(self, (v % self.p,) + (0,) * (self.m - 1))
        coeffs = [c % self.p for c in v]
        if len(coeffs) > self.m:
            coeffs = _imod(coeffs, self.modulus, self.p)
        coeffs = list(coeffs) + [0] * (self.m - len(coeffs))
        return FieldElem(self, tuple(coeffs))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def gen(self):
        """The class of u (equals a constant when m = 1)."""
        return self([0, 1])

    def from_index(self, idx: int):
        """Element whose base-p digits are its coefficients; respects cmp."""
        out = []
        for _ in range(self.m):
            idx, r = divmod(idx, self.p)
            out.append(r)
        return FieldElem(self, tuple(out))

    def elements(self):
        for i in range(self.q):
            yield self.from_index(i)

    def random(self, rng):
        return self.from_index(rng.randrange(self.q))

    def nonresidue(self):
        if self._nonres is None:
            i = 2
            while True:
                z = self.from_index(i)
                if not z.is_square():
                    self._nonres = z
                    break
                i += 1
        return self._nonres

    def parse(self, text: str):
        return parse_elem(self, text)


def make_fp2(p: int) -> FieldCtx:
    """F_{p^2} = F_p[u]/(u^2 - c) with c = -1 or the least nonresidue."""
    _check_prime(p)
    if p < 5:
        raise ParameterError("F_{p^2} contexts need p >= 5, got %d" % p)
    return _make_fp2(p)


@lru_cache(maxsize=None)
def _make_fp2(p):
    if p % 4 == 3:
        c = p - 1
    else:
        c = 2
        while legendre(c, p) != -1:
            c += 1
    return FieldCtx(p, ((-c) % p, 0, 1))


def make_ext(p: int, m: int) -> FieldCtx:
    """F_{p^m} with the lexicographically first monic irreducible modulus."""
    _check_prime(p)
    if m < 1:
        raise ParameterError("degree must be >= 1")
    return _make_ext(p, m)


@lru_cache(maxsize=None)
def _make_ext(p, m):
    for idx in range(p ** m):
        coeffs = []
        for _ in range(m):
            idx, r = divmod(idx, p)
            coeffs.append(r)
        f = coeffs + [1]
        if is_irreducible_mod_p(f, p):
            return FieldCtx(p, tuple(f))
    raise InternalError("no irreducible polynomial of degree %d mod %d" % (m, p))


def _check_prime(p):
    if not isinstance(p, int) or p % 2 == 0 or not is_prime(p):
        raise ParameterError("field characteristic must be an odd prime, got %r" % (p,))


# --- elements ---------------------------------------------------------------

class FieldElem:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx, c):
        self.ctx = ctx
        self.c = c

    def _other(self, y):
        if isinstance(y, FieldElem):
            if y.ctx is not self.ctx:
                raise ParameterError("cross-field arithmetic: %r vs %r" % (self.ctx, y.ctx))
            return y.c
        if isinstance(y, int):
            return self.ctx(y).c
        return None

    def __add__(self, y):
        yc = self._other(y)
        if yc is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((a + b) % p for a, b in zip(self.c, yc)))

    __radd__ = __add__

    def __sub__(self, y):
        yc = self._other(y)
        if yc is None:
            return NotImplemented
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((a - b) % p for a, b in zip(self.c, yc)))

    def __rsub__(self, y):
        return (-self) + y

    def __neg__(self):
        p = self.ctx.p
        return FieldElem(self.ctx, tuple(-a % p for a in self.c))

    def __mul__(self, y):
        if isinstance(y, int):
            p = self.ctx.p
            return FieldElem(self.ctx, tuple(a * y % p for a in self.c))
        yc = self._other(y)
        if yc is None:
            return NotImplemented
        return FieldElem(self.ctx, _mul(self.ctx, self.c, yc))

    __rmul__ = __mul__

    def inverse(self):
        ctx, p, c = self.ctx, self.ctx.p, self.c
        if not any(c):
            raise ZeroDivisionError("inverse of zero")
        if ctx.m == 1:
            return FieldElem(ctx, (pow(c[0], -1, p),))
        if ctx.m == 2:
            c0, c1 = ctx.modulus[0], ctx.modulus[1]
            a0, a1 = c
            # conjugate of a0 + a1*u is (a0 - c1*a1) - a1*u
            b0 = (a0 - c1 * a1) % p
            n = (a0 * a0 - c1 * a0 * a1 + c0 * a1 * a1) % p
            ni = pow(n, -1, p)
            return FieldElem(ctx, (b0 * ni % p, -a1 * ni % p))
        g, s = _ixgcd(list(c), list(ctx.modulus), p)
        if g != [1]:
            raise InternalError("modulus is not irreducible")
        return ctx(s)

    def __truediv__(self, y):
        if isinstance(y, int):
            y = self.ctx(y)
        self._other(y)
        return self * y.inverse()

    def __rtruediv__(self, y):
        return self.ctx(y) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        ctx = self.ctx
        result = ctx.one.c
        base = self.c
        while e:
            if e & 1:
                result = _mul(ctx, result, base)
            e >>= 1
            if e:
                base = _mul(ctx, base, base)
        return FieldElem(ctx, result)

    def __eq__(self, y):
        if isinstance(y, FieldElem):
            return self.ctx is y.ctx and self.c == y.c
        if isinstance(y, int):
            return self.c == self.ctx(y).c
        return NotImplemented

    def __ne__(self, y):
        r = self.__eq__(y)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.ctx.p, self.c))

    def __bool__(self):
        return any(self.c)

    # canonical order: highest coefficient first
    def key(self):
        return tuple(reversed(self.c))

    def index(self):
        return sum(a * self.ctx.p ** i for i, a in enumerate(self.c))

    def __lt__(self, y):
        self._check_cmp(y)
        return self.key() < y.key()

    def __le__(self, y):
        self._check_cmp(y)
        return self.key() <= y.key()

    def __gt__(self, y):
        self._check_cmp(y)
        return self.key() > y.key()

    def __ge__(self, y):
        self._check_cmp(y)
        return self.key() >= y.key()

    def _check_cmp(self, y):
        if not isinstance(y, FieldElem) or y.ctx is not self.ctx:
            raise ParameterError("comparison across fields")

    def is_prime_subfield(self):
        return not any(self.c[1:])

    def to_int(self):
        if not self.is_prime_subfield():
            raise ParameterError("%s is not in the prime field" % self)
        return self.c[0]

    def frobenius(self):
        return frobenius(self)

    def is_square(self):
        if not any(self.c):
            return True
        ctx = self.ctx
        if ctx.m == 2:
            return legendre(self.norm_to_fp(), ctx.p) == 1
        return self ** ((ctx.q - 1) // 2) == 1

    def norm_to_fp(self):
        """Norm F_{p^2} -> F_p as an integer (degree 2 only)."""
        ctx = self.ctx
        c0, c1 = ctx.modulus[0], ctx.modulus[1]
        a0, a1 = self.c
        return (a0 * a0 - c1 * a0 * a1 + c0 * a1 * a1) % ctx.p

    def sqrt(self):
        return sqrt(self)

    def __str__(self):
        return elem_text(self)

    def __repr__(self):
        return "FieldElem(%s)" % elem_text(self)


def _mul(ctx, a, b):
    p = ctx.p
    m = ctx.m
    if m == 1:
        return (a[0] * b[0] % p,)
    if m == 2:
        c0, c1 = ctx.modulus[0], ctx.modulus[1]
        t0 = a[0] * b[0]
        t1 = a[0] * b[1] + a[1] * b[0]
        t2 = a[1] * b[1]
        return ((t0 - c0 * t2) % p, (t1 - c1 * t2) % p)
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    f = ctx.modulus
    for k in range(2 * m - 2, m - 1, -1):
        t = prod[k] % p
        if t:
            base = k - m
            for i in range(m):
                prod[base + i] -= t * f[i]
    return tuple(v % p for v in prod[:m])


def cmp(x: FieldElem, y: FieldElem) -> int:
    """-1, 0 or 1 under the canonical order (u-coefficient first)."""
    x._check_cmp(y)
    kx, ky = x.key(), y.key()
    return (kx > ky) - (kx < ky)


def frobenius(x: FieldElem) -> FieldElem:
    ctx = x.ctx
    if ctx.m == 1:
        return x
    if ctx.m == 2:
        if ctx._frob_u is None:
            ctx._frob_u = ctx.gen ** ctx.p
        return ctx(x.c[0]) + ctx._frob_u * x.c[1]
    return x ** ctx.p


def sqrt(x: FieldElem):
    """Square root with the smaller canonical order, or None."""
    ctx = x.ctx
    if not x:
        return x
    if not x.is_square():
        return None
    q = ctx.q
    s, t = 0, q - 1
    while t % 2 == 0:
        t //= 2
        s += 1
    z = ctx.nonresidue()
    c = z ** t
    r = x ** ((t + 1) // 2)
    b = x ** t
    mm = s
    while b != 1:
        i, b2 = 0, b
        while b2 != 1:
            b2 = b2 * b2
            i += 1
        g = c ** (1 << (mm - i - 1))
        r = r * g
        c = g * g
        b = b * c
        mm = i
    if r * r != x:
        raise InternalError("Tonelli-Shanks produced a wrong root")
    nr = -r
    return r if r.key() <= nr.key() else nr


def poly_text(coeffs, var="x"):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        a = coeffs[i]
        if a == 0 and not (i == 0 and not terms):
            continue
        if i == 0:
            terms.append(str(a))
        elif i == 1:
            terms.append(var if a == 1 else "%d*%s" % (a, var))
        else:
            terms.append("%s^%d" % (var, i) if a == 1 else "%d*%s^%d" % (a, var, i))
    return "+".join(terms)


def elem_text(x: FieldElem) -> str:
    """'a*u+b', or 'b' when the u-part vanishes; higher degrees add u^i terms."""
    c = x.c
    parts = []
    for i in range(len(c) - 1, 0, -1):
        if c[i]:
            parts.append("%d*u" % c[i] if i == 1 else "%d*u^%d" % (c[i], i))
    parts.append(str(c[0]))
    return "+".join(parts)


def parse_elem(ctx: FieldCtx, text: str) -> FieldElem:
    coeffs = [0] * ctx.m
    for term in text.replace(" ", "").split("+"):
        if not term:
            raise ParameterError("bad field element %r" % text)
        if "u" in term:
            coef, _, power = term.partition("u")
            coef = coef.rstrip("*")
            deg = int(power[1:]) if power.startswith("^") else 1
            val = int(coef) if coef else 1
        else:
            deg, val = 0, int(term)
        if deg >= ctx.m:
            raise ParameterError("bad field element %r" % text)
        coeffs[deg] = (coeffs[deg] + val) % ctx.p
    return ctx(coeffs)


# --- polynomials over a field context (lists of FieldElem, low first) --------

def poly_trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def poly_add(a, b):
    n = max(len(a), len(b))
    ctx = (a or b)[0].ctx
    z = ctx.zero
    return poly_trim([(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)])


def poly_sub(a, b):
    n = max(len(a), len(b))
    if not (a or b):
        return []
    ctx = (a or b)[0].ctx
    z = ctx.zero
    return poly_trim([(a[i] if i < len(a) else z) - (b[i] if i < len(b) else z) for i in range(n)])


def poly_scale(a, s):
    return poly_trim([x * s for x in a])


def poly_mul(a, b):
    if not a or not b:
        return []
    ctx = a[0].ctx
    out = _raw_mul(ctx, [x.c for x in a], [y.c for y in b])
    return poly_trim([FieldElem(ctx, c) for c in out])


def poly_divmod(a, f):
    f = poly_trim(f)
    if not f:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(f):
        return [], poly_trim(a)
    ctx = f[0].ctx
    q, r = _raw_divmod(ctx, [x.c for x in a], [y.c for y in f])
    return (poly_trim([FieldElem(ctx, c) for c in q]),
            poly_trim([FieldElem(ctx, c) for c in r]))


def _raw_mul(ctx, A, B):
    """Product of coefficient-tuple polynomials."""
    p = ctx.p
    n = len(A) + len(B) - 1
    if ctx.m == 1:
        t = [0] * n
        for i, (x,) in enumerate(A):
            if x:
                for j, (y,) in enumerate(B):
                    t[i + j] += x * y
        return [(v % p,) for v in t]
    if ctx.m == 2:
        c0, c1 = ctx.modulus[0], ctx.modulus[1]
        t0, t1, t2 = [0] * n, [0] * n, [0] * n
        for i, (x0, x1) in enumerate(A):
            for j, (y0, y1) in enumerate(B):
                k = i + j
                t0[k] += x0 * y0
                t1[k] += x0 * y1 + x1 * y0
                t2[k] += x1 * y1
        return [((t0[k] - c0 * t2[k]) % p, (t1[k] - c1 * t2[k]) % p) for k in range(n)]
    zero = (0,) * ctx.m
    out = [zero] * n
    for i, x in enumerate(A):
        for j, y in enumerate(B):
            pr = _mul(ctx, x, y)
            out[i + j] = tuple((u + v) % p for u, v in zip(out[i + j], pr))
    return out


def _raw_inv(ctx, a):
    return FieldElem(ctx, a).inverse().c


def _raw_divmod(ctx, A, F):
    p = ctx.p
    A = list(A)
    d = len(F) - 1
    inv = _raw_inv(ctx, F[-1])
    Q = [None] * (len(A) - d)
    if ctx.m == 2:
        c0, c1 = ctx.modulus[0], ctx.modulus[1]
        i0, i1 = inv
        for k in range(len(A) - 1, d - 1, -1):
            a0, a1 = A[k]
            s2 = a1 * i1
            t0 = (a0 * i0 - c0 * s2) % p
            t1 = (a0 * i1 + a1 * i0 - c1 * s2) % p
            Q[k - d] = (t0, t1)
            if t0 or t1:
                base = k - d
                for i in range(d + 1):
                    f0, f1 = F[i]
                    r2 = t1 * f1
                    b0, b1 = A[base + i]
                    A[base + i] = ((b0 - t0 * f0 + c0 * r2) % p,
                                   (b1 - t0 * f1 - t1 * f0 + c1 * r2) % p)
        return Q, A[:d]
    for k in range(len(A) - 1, d - 1, -1):
        t = _mul(ctx, A[k], inv)
        Q[k - d] = t
        if any(t):
            base = k - d
            for i in range(d + 1):
                pr = _mul(ctx, t, F[i])
                A[base + i] = tuple((u - v) % p for u, v in zip(A[base + i], pr))
    return Q, A[:d]


def poly_mod(a, f):
    return poly_divmod(a, f)[1]


def poly_monic(a):
    a = poly_trim(a)
    if not a:
        return a
    inv = a[-1].inverse()
    return [x * inv for x in a]


def poly_gcd(a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(a, b)
    return poly_monic(a)


def poly_powmod(base, e, f):
    f = poly_trim(f)
    ctx = f[0].ctx
    F = [y.c for y in f]
    R = [ctx.one.c]
    B = _raw_divmod(ctx, [x.c for x in base], F)[1] if len(base) >= len(F) else [x.c for x in base]
    while e:
        if e & 1:
            R = _raw_reduce(ctx, _raw_mul(ctx, R, B), F) if B else []
        e >>= 1
        if e:
            B = _raw_reduce(ctx, _raw_mul(ctx, B, B), F) if B else []
    return poly_trim([FieldElem(ctx, c) for c in R])


def _raw_reduce(ctx, A, F):
    if len(A) < len(F):
        return A
    return _raw_divmod(ctx, A, F)[1]


def poly_eval(a, x):
    acc = x.ctx.zero
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_deriv(a):
    return poly_trim([a[i] * i for i in range(1, len(a))])


def poly_from_roots(roots, ctx):
    out = [ctx.one]
    for r in roots:
        out = poly_mul(out, [-r, ctx.one])
    return out


def poly_roots(f, seed=0):
    """Distinct roots of f in its coefficient field, canonically sorted."""
    f = poly_monic(f)
    if len(f) <= 1:
        return []
    ctx = f[0].ctx
    x = [ctx.zero, ctx.one]
    xq = poly_powmod(x, ctx.q, f)
    g = poly_gcd(f, poly_sub(xq, x))
    rng = random.Random(seed)
    roots = []
    _split(g, ctx, rng, roots)
    return sorted(roots, key=FieldElem.key)


def _split(g, ctx, rng, out):
    d = len(g) - 1
    if d <= 0:
        return
    if d == 1:
        out.append(-g[0])
        return
    if ctx.p == 2:
        raise ParameterError("characteristic 2 is not supported")
    e = (ctx.q - 1) // 2
    while True:
        delta = ctx.random(rng)
        h = poly_powmod([delta, ctx.one], e, g)
        h = poly_gcd(g, poly_sub(h, [ctx.one]))
        if 0 < len(h) - 1 < d:
            _split(h, ctx, rng, out)
            _split(poly_divmod(g, h)[0], ctx, rng, out)
            return


def poly_roots_mult(f, seed=0):
    """Roots with multiplicity as a canonically sorted list."""
    f = poly_monic(f)
    out = []
    for r in poly_roots(f, seed):
        lin = [-r, r.ctx.one]
        while True:
            q, rem = poly_divmod(f, lin)
            if rem:
                break
            out.append(r)
            f = q
    return sorted(out, key=FieldElem.key)
