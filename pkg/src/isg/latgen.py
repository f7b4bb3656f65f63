"""Checks that a lattice is generated by its vectors with norms in a given set,
plus the explicit local bases used for even unimodular lattices."""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice
from .errors import InternalError, ParameterError


class ZLattice:
    """Z^n with the quadratic form Q(v) = v^T G v (G symmetric, rational, positive definite)."""

    def __init__(self, gram, name=None):
        G = [[Fraction(x) for x in row] for row in gram]
        n = len(G)
        if any(len(row) != n for row in G) or any(G[i][j] != G[j][i] for i in range(n) for j in range(n)):
            raise ParameterError("Gram matrix must be square and symmetric")
        if not lattice.is_positive_definite(G):
            raise ParameterError("Gram matrix is not positive definite")
        self.n = n
        self.gram = G
        self.name = name
        # integer copy when possible keeps the enumeration in ints
        self._int = all(x.denominator == 1 for row in G for x in row)
        self._M = [[int(x) for x in row] for row in G] if self._int else G

    def __repr__(self):
        return "ZLattice(%s, n=%d)" % (self.name or "?", self.n)

    def Q(self, v):
        return lattice.qform(self._M, v)

    def det(self):
        return lattice.det(self.gram)

    @classmethod
    def from_quat(cls, L, name=None):
        """The norm form of a quaternion lattice in its Hermite basis."""
        d2 = L.den * L.den
        return cls([[Fraction(x, d2) for x in row] for row in L.norm_matrix()], name)


def span_index(vectors, n):
    """[Z^n : span(vectors)], or math.inf if the span has lower rank."""
    rank, idx = lattice.span_rank_index(list(vectors), n)
    return math.inf if idx is None else idx


def vectors_of_norm(L, s):
    """All v in Z^n with Q(v) = s, lexicographic."""
    if s <= 0:
        return []
    return [c for c, v in lattice.enumerate_short(L._M, s) if v == s]


def e8():
    """Cartan matrix of E8 (Bourbaki numbering)."""
    edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
    G = [[2 * int(i == j) for j in range(8)] for i in range(8)]
    for a, b in edges:
        G[a - 1][b - 1] = G[b - 1][a - 1] = -1
    L = ZLattice(G, "E8")
    if L.det() != 1 or any(G[i][i] % 2 for i in range(8)):
        raise InternalError("E8 Gram failed validation")
    return L


def _prune(witness, n):
    """Drop witness vectors that are not needed for index 1."""
    w = list(witness)
    i = len(w) - 1
    while i >= 0:
        trial = w[:i] + w[i + 1:]
        if span_index(trial, n) == 1:
            w = trial
        i -= 1
    return w


@dataclass
class GenerationReport:
    generated: bool
    index: object                  # int or math.inf
    witness: list
    profile: list = field(default_factory=list)   # (s, index of span of norms <= s in S)

    def to_dict(self):
        idx = lambda x: "inf" if x == math.inf else x
        return {"generated": self.generated, "index": idx(self.index),
                "index_profile": [[s, idx(i)] for s, i in self.profile],
                "witness": [list(v) for v in self.witness]}


def generated_by_norms(L, norms, cap):
    """Is Z^n spanned by the vectors whose norm lies in `norms` and is at most `cap`?

    Vectors are added norm by norm (increasing) and greedily: a vector joins
    the witness only if it changes the Hermite form of the running span.
    The profile records the running index after each norm."""
    S = sorted({int(s) for s in norms if 1 <= s <= cap})
    if not S:
        raise ParameterError("no admissible norm at most the cap")
    n = L.n
    H = []
    witness = []
    profile = []
    idx = math.inf
    for s in S:
        if idx != 1:
            for v in vectors_of_norm(L, s):
                H2 = lattice.hnf(H + [v])
                if H2 != H:
                    H = H2
                    witness.append(v)
                    if len(H) == n and math.prod(H[i][i] for i in range(n)) == 1:
                        break
            idx = span_index(H, n) if H else math.inf
        profile.append((s, idx))
    if idx == 1:
        witness = _prune(witness, n)
        if span_index(witness, n) != 1:
            raise InternalError("witness does not re-verify")
    return GenerationReport(idx == 1, idx, witness, profile)


def ell_powers(ell, cap):
    out, x = [], 1
    while x <= cap:
        out.append(x)
        x *= ell
    return out


def witness_2_matrix(t):
    rows = []
    for i in range(6):
        r = [0] * 8
        r[i] = 1
        r[6], r[7] = 1, t
        rows.append(r)
    rows.append([0, 0, 0, 0, 0, 0, 1, t])
    rows.append([1, t, 0, 0, 0, 0, 0, 1])
    return rows


def hyperbolic_norm(v):
    """2x1x2 + 2x3x4 + 2x5x6 + 2x7x8."""
    return sum(2 * v[i] * v[i + 1] for i in range(0, 8, 2))


def local_witness_2(t):
    """Determinant of the norm-2t basis for the 2-adic form; checks each row's norm."""
    M = witness_2_matrix(t)
    bad = [r for r in M if hyperbolic_norm(r) != 2 * t]
    if bad:
        raise InternalError("rows with wrong norm: %s" % bad)
    return lattice.det(M)


def witness_p_matrix(x, y, z):
    rows = [[1, 0, 0, 0, 0, x, y, z], [-1, 0, 0, 0, 0, x, y, z]]
    for i in range(1, 5):
        r = [0] * 8
        r[i] = 1
        r[5:] = [x, y, z]
        rows.append(r)
    rows.append([x, y, z, 0, 0, 1, 0, 0])
    rows.append([x, y, z, 0, 0, 0, 1, 0])
    return rows


def local_witness_p(x, y, z):
    """Determinant of the odd-prime local basis; checks every row has norm x^2+y^2+z^2+1."""
    M = witness_p_matrix(x, y, z)
    s = x * x + y * y + z * z + 1
    bad = [r for r in M if sum(a * a for a in r) != s]
    if bad:
        raise InternalError("rows with wrong norm: %s" % bad)
    return lattice.det(M)


def order_profile(p, cls, ell=2, cap=1024):
    """Generation report of the left order of class `cls` by norms ell^k <= cap."""
    from .quat import deuring
    D = deuring(p)
    if not 0 <= cls < D.h:
        raise ParameterError("class index out of range")
    L = ZLattice.from_quat(D.left_orders[cls], "O_%d" % cls)
    return generated_by_norms(L, ell_powers(ell, cap), cap)
