"""Quaternion side of the Deuring correspondence.

Works in B_{p,inf} = (-1, -p / Q) for p = 3 mod 4 with the maximal order
Z + Z i + Z (i+j)/2 + Z (1+k)/2.  Lattices are stored as an integer
Hermite basis over a common denominator, so equality and serialization are
exact and reproducible.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import lattice
from .errors import CapacityError, InternalError, ParameterError, UnsupportedParameterError
from .ff import is_prime

THETA_CAP = lattice.ENUM_CAP
BRANDT_NMAX = 60


def _qmul(x, y, al, be):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (a1 * a2 + al * b1 * b2 + be * c1 * c2 - al * be * d1 * d2,
            a1 * b2 + b1 * a2 - be * c1 * d2 + be * d1 * c2,
            a1 * c2 + c1 * a2 + al * b1 * d2 - al * d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2)


class QuatAlg:
    """Rational quaternion algebra with i^2 = alpha, j^2 = beta, k = ij = -ji."""

    def __init__(self, alpha, beta, p=None):
        if alpha == 0 or beta == 0:
            raise ParameterError("structure constants must be nonzero")
        self.alpha = int(alpha)
        self.beta = int(beta)
        self.p = p
        # Nm(a + bi + cj + dk) = a^2 - alpha b^2 - beta c^2 + alpha beta d^2
        self.weights = (1, -self.alpha, -self.beta, self.alpha * self.beta)

    def __repr__(self):
        return "QuatAlg(%d, %d)" % (self.alpha, self.beta)

    def __eq__(self, other):
        return isinstance(other, QuatAlg) and (self.alpha, self.beta) == (other.alpha, other.beta)

    def __hash__(self):
        return hash((self.alpha, self.beta))

    def __call__(self, a=0, b=0, c=0, d=0):
        return Quat(self, (a, b, c, d))

    @property
    def one(self):
        return self(1)

    @property
    def i(self):
        return self(0, 1)

    @property
    def j(self):
        return self(0, 0, 1)

    @property
    def k(self):
        return self(0, 0, 0, 1)


class Quat:
    __slots__ = ("alg", "c")

    def __init__(self, alg, c):
        self.alg = alg
        self.c = tuple(Fraction(x) for x in c)

    def _lift(self, other):
        if isinstance(other, Quat):
            if other.alg != self.alg:
                raise ParameterError("quaternions from different algebras")
            return other
        return Quat(self.alg, (other, 0, 0, 0))

    def __add__(self, other):
        o = self._lift(other)
        return Quat(self.alg, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Quat(self.alg, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Quat(self.alg, [-a for a in self.c])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Quat(self.alg, [a * other for a in self.c])
        if isinstance(other, QuatLattice):
            return NotImplemented
        o = self._lift(other)
        return Quat(self.alg, _qmul(self.c, o.c, self.alg.alpha, self.alg.beta))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Quat(self.alg, [other * a for a in self.c])
        return self._lift(other) * self

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Quat(self.alg, [a / other for a in self.c])
        return self * self._lift(other).inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.c == (Fraction(other), 0, 0, 0)
        return isinstance(other, Quat) and self.alg == other.alg and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return "Quat(%s)" % ", ".join(str(x) for x in self.c)

    def conj(self):
        a, b, c, d = self.c
        return Quat(self.alg, (a, -b, -c, -d))

    def norm(self):
        return sum(w * x * x for w, x in zip(self.alg.weights, self.c))

    def trace(self):
        return 2 * self.c[0]

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero quaternion")
        return self.conj() / n

    def is_zero(self):
        return not any(self.c)


class QuatLattice:
    """Full-rank lattice in a quaternion algebra: rows/den in (1, i, j, k) coordinates."""

    def __init__(self, alg, rows, den=1):
        rows = [tuple(int(x) for x in r) for r in rows]
        H = lattice.hnf(rows)
        if len(H) != 4:
            raise ParameterError("lattice does not have full rank")
        g = den
        for r in H:
            for x in r:
                g = math.gcd(g, x)
        if g > 1:
            H = [tuple(x // g for x in r) for r in H]
            den //= g
        self.alg = alg
        self.rows = tuple(H)
        self.den = den
        self._M = None
        self._inv = None

    @classmethod
    def from_quats(cls, alg, quats):
        d = 1
        for q in quats:
            for x in q.c:
                d = d * x.denominator // math.gcd(d, x.denominator)
        rows = [tuple(int(x * d) for x in q.c) for q in quats]
        return cls(alg, rows, d)

    @classmethod
    def from_strings(cls, alg, entries):
        fr = [[Fraction(x) for x in row] for row in entries]
        return cls.from_quats(alg, [Quat(alg, r) for r in fr])

    def __eq__(self, other):
        return isinstance(other, QuatLattice) and self.alg == other.alg and \
            (self.rows, self.den) == (other.rows, other.den)

    def __hash__(self):
        return hash((self.rows, self.den))

    def __repr__(self):
        return "QuatLattice(%r, den=%d)" % (self.rows, self.den)

    def basis(self):
        return [Quat(self.alg, [Fraction(x, self.den) for x in r]) for r in self.rows]

    def to_strings(self):
        return [[str(Fraction(x, self.den)) for x in r] for r in self.rows]

    def to_dict(self):
        return {"alpha": self.alg.alpha, "beta": self.alg.beta, "basis": self.to_strings()}

    def norm_matrix(self):
        """Integer M with Nm(sum c_r v_r) = c^T M c / den^2."""
        if self._M is None:
            w = self.alg.weights
            R = self.rows
            self._M = tuple(tuple(sum(w[t] * R[r][t] * R[s][t] for t in range(4))
                                  for s in range(4)) for r in range(4))
        return self._M

    def gram(self):
        """G[r][s] = Tr(v_r conj(v_s)), as Fractions."""
        d2 = self.den * self.den
        return [[Fraction(2 * x, d2) for x in row] for row in self.norm_matrix()]

    def det_gram(self):
        return lattice.det(self.gram())

    def norm(self):
        """Reduced norm: the positive generator of the ideal spanned by Nm(L)."""
        M = self.norm_matrix()
        g = 0
        for r in range(4):
            g = math.gcd(g, M[r][r])
            for s in range(r + 1, 4):
                g = math.gcd(g, 2 * M[r][s])
        return Fraction(g, self.den * self.den)

    def volume(self):
        return Fraction(abs(lattice.det([list(r) for r in self.rows])), self.den ** 4)

    def index_in(self, other):
        q = self.volume() / other.volume()
        if q.denominator != 1:
            raise ParameterError("not a sublattice")
        return int(q)

    def coords(self, q):
        if self._inv is None:
            self._inv = lattice.inverse([list(r) for r in self.rows])
        v = [x * self.den for x in q.c]
        return [sum(v[t] * self._inv[t][s] for t in range(4)) for s in range(4)]

    def contains(self, q):
        return all(x.denominator == 1 for x in self.coords(q))

    def contains_lattice(self, other):
        return all(self.contains(b) for b in other.basis())

    def _product_rows(self, other):
        al, be = self.alg.alpha, self.alg.beta
        return [_qmul(a, b, al, be) for a in self.rows for b in other.rows]

    def __mul__(self, other):
        if isinstance(other, QuatLattice):
            return QuatLattice(self.alg, self._product_rows(other), self.den * other.den)
        if isinstance(other, Quat):
            return QuatLattice.from_quats(self.alg, [b * other for b in self.basis()])
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Quat):
            return QuatLattice.from_quats(self.alg, [other * b for b in self.basis()])
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, s):
        s = Fraction(s)
        return QuatLattice(self.alg, [[x * s.numerator for x in r] for r in self.rows],
                           self.den * s.denominator)

    def conj(self):
        return QuatLattice(self.alg, [(a, -b, -c, -d) for a, b, c, d in self.rows], self.den)

    def __add__(self, other):
        d = self.den * other.den // math.gcd(self.den, other.den)
        rows = [[x * (d // self.den) for x in r] for r in self.rows]
        rows += [[x * (d // other.den) for x in r] for r in other.rows]
        return QuatLattice(self.alg, rows, d)

    def right_action(self, o):
        """Integer matrix of v -> v*o in this basis (rows = images of basis vectors)."""
        out = []
        for b in self.basis():
            cs = self.coords(b * o)
            if any(x.denominator != 1 for x in cs):
                raise ParameterError("lattice is not stable under this element")
            out.append([int(x) for x in cs])
        return out


def gram_matrix(quats):
    """(Tr(v_r conj(v_s))) for an explicit list of quaternions."""
    return [[(a * b.conj()).trace() for b in quats] for a in quats]


def standard_basis(alg):
    """1, i, (i+j)/2, (1+k)/2."""
    h = Fraction(1, 2)
    return [alg(1), alg(0, 1), alg(0, h, h), alg(h, 0, 0, h)]


def bp_inf(p):
    """(algebra, maximal order) for B_{p,inf} with p = 3 mod 4."""
    if not is_prime(p):
        raise ParameterError("p must be prime")
    if p < 5:
        raise UnsupportedParameterError("p must be at least 5")
    if p % 4 != 3:
        raise UnsupportedParameterError("quaternion models are provided only for p = 3 mod 4")
    alg = QuatAlg(-1, -p, p)
    order = QuatLattice.from_quats(alg, standard_basis(alg))
    return alg, order


def short_vectors(L, bound, cap=THETA_CAP):
    """Nonzero v in L with Nm(v) <= bound, as (coords, Quat, norm), lexicographic in coords."""
    bound = Fraction(bound)
    M = L.norm_matrix()
    d2 = L.den * L.den
    ib = math.floor(bound * d2)
    out = []
    basis = L.basis()
    for c, v in lattice.enumerate_short(M, ib, cap):
        q = sum((x * b for x, b in zip(c, basis)), L.alg(0))
        out.append((c, q, Fraction(v, d2)))
    return out


@dataclass(frozen=True)
class ThetaSeries:
    normalization: Fraction
    coeffs: tuple

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def prefix(self, N):
        return ThetaSeries(self.normalization, self.coeffs[:N + 1])

    def csv(self):
        return "\n".join("%d,%d" % (n, r) for n, r in enumerate(self.coeffs))


def theta_series(L, normalization, N, cap=THETA_CAP):
    """r(n) = #{v in L : normalization*Nm(v) = n} for 0 <= n <= N."""
    normalization = Fraction(normalization)
    if normalization <= 0:
        raise ParameterError("normalization must be positive")
    M = L.norm_matrix()
    scale = normalization / (L.den * L.den)   # n = scale * c^T M c
    coeffs = [0] * (N + 1)
    coeffs[0] = 1
    ib = math.floor(N / scale)
    for _, v in lattice.enumerate_short(M, ib, cap):
        n = scale * v
        if n.denominator != 1:
            raise ParameterError("normalized norm %s is not integral" % n)
        coeffs[int(n)] += 1
    return ThetaSeries(normalization, tuple(coeffs))


def _subspaces2(ell):
    """All 2-dimensional subspaces of F_ell^4, as reduced row echelon pairs."""
    from itertools import product
    out = []
    for i in range(4):
        for j in range(i + 1, 4):
            free1 = [t for t in range(i + 1, 4) if t != j]
            free2 = list(range(j + 1, 4))
            for f1 in product(range(ell), repeat=len(free1)):
                for f2 in product(range(ell), repeat=len(free2)):
                    v1 = [0] * 4
                    v1[i] = 1
                    for t, x in zip(free1, f1):
                        v1[t] = x
                    v2 = [0] * 4
                    v2[j] = 1
                    for t, x in zip(free2, f2):
                        v2[t] = x
                    out.append((i, j, v1, v2))
    return out


def right_subideals(I, O, ell):
    """Right O-ideals J with ell*I < J < I of index ell^2 (ell+1 of them)."""
    acts = [I.right_action(o) for o in O.basis()]
    target = I.norm() * ell
    out = []
    for i, j, v1, v2 in _subspaces2(ell):
        ok = True
        for R in acts:
            for v in (v1, v2):
                w = [sum(v[r] * R[r][s] for r in range(4)) % ell for s in range(4)]
                w = [(a - w[i] * b - w[j] * c) % ell for a, b, c in zip(w, v1, v2)]
                if any(w):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        rows = [[ell * x for x in r] for r in I.rows]
        for v in (v1, v2):
            rows.append([sum(v[r] * I.rows[r][s] for r in range(4)) for s in range(4)])
        J = QuatLattice(I.alg, rows, I.den)
        if J.norm() == target:
            out.append(J)
    if len(out) != ell + 1:
        raise InternalError("found %d ideals of norm %d, expected %d" % (len(out), ell, ell + 1))
    return out


def right_ideals_of_norm(O, ell):
    if ell not in (2, 3, 5, 7) or ell == O.alg.p:
        raise ParameterError("ell must be one of 2, 3, 5, 7 and differ from p")
    return right_subideals(O, O, ell)


def ideal_equiv(I, J):
    """True iff J = lambda*I for some nonzero lambda."""
    M = I * J.conj()
    target = I.norm() * J.norm()
    return any(nm == target for _, _, nm in short_vectors(M, target))


def reduce_ideal(I):
    """Equivalent ideal (conj(a)/Nm(I))*I for a shortest nonzero a in I."""
    n = I.norm()
    bound = n
    while True:
        vs = short_vectors(I, bound)
        if vs:
            break
        bound *= 2
    _, a, _ = min(vs, key=lambda t: (t[2], t[0]))
    return (a.conj() / n) * I


def left_order(I):
    """O_l(I) = I*conj(I)/Nm(I); checked to be a maximal order."""
    L = (I * I.conj()).scale(1 / I.norm())
    p = I.alg.p
    if p is not None and L.det_gram() != p * p:
        raise InternalError("left order has discriminant %s" % L.det_gram())
    return L


def right_order(I):
    L = (I.conj() * I).scale(1 / I.norm())
    p = I.alg.p
    if p is not None and L.det_gram() != p * p:
        raise InternalError("right order has discriminant %s" % L.det_gram())
    return L


def _kernel_mod(G, p):
    """Basis of the left kernel of the integer matrix G mod p."""
    n = len(G)
    # solve x G = 0: row reduce G^T
    A = [[G[r][s] % p for r in range(n)] for s in range(n)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(n):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -A[i][f] % p
        out.append(v)
    return out


def two_sided_p(O):
    """The two-sided ideal of norm p: pO plus the radical of the trace form mod p."""
    p = O.alg.p
    G = O.gram()
    Gi = [[int(x) for x in row] for row in G]
    if any(x.denominator != 1 for row in G for x in row):
        raise ParameterError("not an order")
    rows = [[p * x for x in r] for r in O.rows]
    for v in _kernel_mod(Gi, p):
        rows.append([sum(v[r] * O.rows[r][s] for r in range(4)) for s in range(4)])
    P = QuatLattice(O.alg, rows, O.den)
    if P * P != O.scale(p):
        raise InternalError("P^2 != pO")
    if P.norm() != p:
        raise InternalError("two-sided ideal has norm %s" % P.norm())
    return P


def hom_lattice(Ii, Ij):
    """(I_j * conj(I_i), 1/(Nm I_i Nm I_j)); the normalized form must be integral."""
    L = Ij * Ii.conj()
    nu = 1 / (Ii.norm() * Ij.norm())
    G = [[nu * x for x in row] for row in L.gram()]
    if any(x.denominator != 1 for row in G for x in row) or \
            any(G[r][r] % 2 for r in range(4)):
        raise InternalError("normalized hom form is not integral")
    return L, nu


def normalized_gram(L, nu):
    return [[nu * x for x in row] for row in L.gram()]


def level(G):
    """Smallest N > 0 with N*G^{-1} integral with even diagonal."""
    Gi = lattice.inverse(G)
    N = 1
    for row in Gi:
        for x in row:
            N = N * x.denominator // math.gcd(N, x.denominator)
    while True:
        if all((N * Gi[r][r]) % 2 == 0 for r in range(len(G))):
            return N
        N *= 2


def unit_count(order):
    return sum(1 for _, _, n in short_vectors(order, 1) if n == 1)


def _class_number(p):
    from .ssgraph import class_number
    return class_number(p)


def class_set(O, ell=2):
    """Representatives of the right O-ideal classes, starting with O itself.

    Breadth-first search over ell-neighbours (right sub-ideals of index ell^2),
    each reduced to a small equivalent ideal and deduplicated by ideal_equiv."""
    p = O.alg.p
    h = _class_number(p)
    reps = [O]
    frontier = [O]
    max_depth = 2 * math.ceil(math.log(p, ell)) + 10
    depth = 0
    while frontier and len(reps) < h:
        depth += 1
        if depth > max_depth:
            break
        nxt = []
        for I in frontier:
            for J in right_subideals(I, O, ell):
                J = reduce_ideal(J)
                if not any(ideal_equiv(J, R) for R in reps):
                    reps.append(J)
                    nxt.append(J)
        frontier = nxt
    if len(reps) != h:
        raise InternalError("found %d ideal classes, expected %d" % (len(reps), h))
    return reps


def class_index(I, reps):
    for n, R in enumerate(reps):
        if ideal_equiv(I, R):
            return n
    raise InternalError("ideal is in no known class")


class BrandtMatrix:
    def __init__(self, n, rows):
        self.n = n
        self.rows = tuple(tuple(Fraction(x) for x in r) for r in rows)

    @property
    def h(self):
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, BrandtMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "BrandtMatrix(%d, %r)" % (self.n, self.as_int())

    def __matmul__(self, other):
        h = self.h
        rows = [[sum(self.rows[i][k] * other.rows[k][j] for k in range(h)) for j in range(h)]
                for i in range(h)]
        return BrandtMatrix(self.n * other.n, rows)

    def __sub__(self, other):
        return BrandtMatrix(self.n, [[a - b for a, b in zip(r, s)]
                                     for r, s in zip(self.rows, other.rows)])

    def __mul__(self, c):
        return BrandtMatrix(self.n, [[c * a for a in r] for r in self.rows])

    __rmul__ = __mul__

    def trace(self):
        return sum(self.rows[i][i] for i in range(self.h))

    def is_integral(self):
        return all(x.denominator == 1 and x >= 0 for r in self.rows for x in r)

    def as_int(self):
        return [[int(x) if x.denominator == 1 else x for x in r] for r in self.rows]

    def row_sums(self):
        return [sum(r) for r in self.rows]

    def is_permutation(self):
        return all(sorted(r) == [0] * (self.h - 1) + [1] for r in self.rows) and \
            all(sorted(c) == [0] * (self.h - 1) + [1] for c in zip(*self.rows))


class Deuring:
    """Class set, left orders, unit counts and hom thetas for one prime."""

    def __init__(self, p):
        self.p = p
        self.alg, self.order = bp_inf(p)
        self.reps = class_set(self.order, 2)
        self.h = len(self.reps)
        self.left_orders = [left_order(I) for I in self.reps]
        self.units = [unit_count(L) for L in self.left_orders]
        if any(u not in (2, 4, 6) for u in self.units):
            raise InternalError("unit counts %s" % self.units)
        self._P = None
        self._inv = None
        self._theta = {}
        self._theta_n = -1

    @property
    def P(self):
        if self._P is None:
            self._P = two_sided_p(self.order)
        return self._P

    def involution(self):
        """Class permutation I -> I*P (conjugation by Frobenius)."""
        if self._inv is None:
            self._inv = [class_index(I * self.P, self.reps) for I in self.reps]
        return self._inv

    def hom(self, i, j):
        return hom_lattice(self.reps[i], self.reps[j])

    def thetas(self, N):
        """Dict (i, j) -> ThetaSeries of hom_lattice(I_i, I_j) to precision N."""
        if N > self._theta_n:
            for i in range(self.h):
                for j in range(self.h):
                    L, nu = self.hom(i, j)
                    self._theta[i, j] = theta_series(L, nu, N)
            self._theta_n = N
        return {k: v.prefix(N) for k, v in self._theta.items()}

    def brandt_matrix(self, n):
        if n < 1 or n > 4 * self.p:
            raise ParameterError("n out of range")
        th = self.thetas(max(n, self._theta_n))
        rows = [[Fraction(th[i, j][n], self.units[j]) for j in range(self.h)]
                for i in range(self.h)]
        B = BrandtMatrix(n, rows)
        if not B.is_integral():
            raise InternalError("non-integral Brandt matrix B(%d)" % n)
        return B

    def mass(self):
        return sum(Fraction(1, u) for u in self.units)


@lru_cache(maxsize=16)
def deuring(p):
    return Deuring(p)


def brandt(p, n_max):
    """[B(1), ..., B(n_max)]."""
    if n_max < 1 or n_max > BRANDT_NMAX:
        raise ParameterError("n_max must be between 1 and %d" % BRANDT_NMAX)
    D = deuring(p)
    D.thetas(n_max)
    return [D.brandt_matrix(n) for n in range(1, n_max + 1)]


@dataclass
class IdentityReport:
    p: int
    checks: list      # (name, ok, detail)

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)


def brandt_identities(p):
    from .ssgraph import enumerate_ss
    D = deuring(p)
    Bs = {n: B for n, B in enumerate(brandt(p, 27), start=1)}
    I1 = Bs[1]
    checks = []
    for ell in (2, 3):
        for a in (1, 2):
            lhs = Bs[ell ** (a + 1)]
            rhs = Bs[ell] @ Bs[ell ** a] - (Bs[ell ** (a - 1)] * ell)
            checks.append(("B(%d) = B(%d)B(%d) - %dB(%d)" % (ell ** (a + 1), ell, ell ** a, ell, ell ** (a - 1)),
                           lhs.rows == rhs.rows, None if lhs.rows == rhs.rows else (lhs.as_int(), rhs.as_int())))
    checks.append(("B(1) = Id", I1.rows == tuple(tuple(Fraction(int(i == j)) for j in range(D.h))
                                                  for i in range(D.h)), None))
    checks.append(("B(2)B(3) = B(6)", (Bs[2] @ Bs[3]).rows == Bs[6].rows, None))
    Bp = D.brandt_matrix(p)
    sq = Bp @ Bp
    checks.append(("B(p) is a permutation", Bp.is_permutation(), Bp.as_int()))
    checks.append(("B(p)^2 = Id", sq.rows == I1.rows, None))
    sp = sum(1 for j in enumerate_ss(p)[0] if j.is_prime_subfield())
    checks.append(("Tr B(p) = spine size", Bp.trace() == sp, (int(Bp.trace()), sp)))
    inv = D.involution()
    perm = [[int(inv[i] == j) for j in range(D.h)] for i in range(D.h)]
    checks.append(("B(p) = Frobenius pairing", Bp.as_int() == perm, None))
    return IdentityReport(p, checks)


def min_nonint_endo(order, p=None):
    """Smallest n >= 1 with more elements of norm n in the order than in Z."""
    p = p or order.alg.p
    cap = 4 * p
    N = 8
    while True:
        N = min(N, cap)
        th = theta_series(order, 1, N)
        for n in range(1, N + 1):
            rz = 2 if math.isqrt(n) ** 2 == n else 0
            if th[n] > rz:
                return n
        if N >= cap:
            raise InternalError("no non-integer endomorphism of norm <= %d" % cap)
        N *= 2


@dataclass
class RigidityReport:
    p: int
    N: int
    h: int
    involution: list
    paired_equal: bool
    violations: list          # pairs (i, j) non-paired with equal thetas
    power_violations: list    # same, restricted to coefficients at 2^k

    @property
    def ok(self):
        return self.paired_equal and not self.violations


def theta_rigidity(p, N=None):
    """Check that endomorphism thetas separate classes exactly up to the Frobenius pairing."""
    N = p if N is None else N
    if N < p:
        raise ParameterError("N must be at least p")
    D = deuring(p)
    thetas = [theta_series(D.left_orders[i], 1, N) for i in range(D.h)]
    inv = D.involution()
    paired_equal = all(thetas[i] == thetas[inv[i]] for i in range(D.h))
    powers = [2 ** k for k in range(0, N.bit_length()) if 2 ** k <= N]
    viol, pviol = [], []
    for i in range(D.h):
        for j in range(i + 1, D.h):
            if j == inv[i]:
                continue
            if thetas[i] == thetas[j]:
                viol.append((i, j))
            if all(thetas[i][n] == thetas[j][n] for n in powers):
                pviol.append((i, j))
    return RigidityReport(p, N, D.h, inv, paired_equal, viol, pviol)
