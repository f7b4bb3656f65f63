"""Supersingular isogeny graphs G(p, ell) built from curves.

Vertices are the supersingular j-invariants in F_{p^2}, ordered by the
canonical field order.  A[i][k] counts the order-ell subgroups of E(j_i)
whose quotient has j-invariant j_k.
"""

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache

from .curve import (canonical_model, hp_coefficients, j_from_lambda,
                    subgroups_of_order, two_torsion, velu)
from .errors import CapacityError, InternalError, ParameterError
from .ff import (FieldElem, frobenius, is_prime, legendre, make_fp2,
                 poly_from_roots, poly_roots_mult)

CM_TABLE = (
    (7, -3375),
    (11, -32768),
    (19, -884736),
    (43, -884736000),
    (67, -147197952000),
    (163, -262537412640768000),
)


def class_number(p: int) -> int:
    if p in (2, 3):
        return 1
    return p // 12 + {1: 0, 5: 1, 7: 1, 11: 2}[p % 12]


def aut_weight(j: FieldElem) -> int:
    """2w_j = #Aut(E(j)) for p > 3."""
    if j == 0:
        return 6
    if j == 1728:
        return 4
    return 2


def _check_p(p):
    if not isinstance(p, int) or p < 5 or not is_prime(p):
        raise ParameterError("p must be a prime >= 5, got %r" % (p,))


def seed_ss_j(p: int) -> FieldElem:
    _check_p(p)
    F = make_fp2(p)
    if p % 3 == 2:
        return F(0)
    if p % 4 == 3:
        return F(1728)
    for D, j in CM_TABLE:
        if legendre(-D, p) == -1:
            return F(j)
    return next(iter(hp_root_js(p)))


def hp_root_js(p: int) -> set:
    """{j(lambda) : H_p(lambda) = 0} by evaluating H_p on all of F_{p^2}."""
    import numpy as np

    F = make_fp2(p)
    if p * p > 10 ** 7:
        raise CapacityError("exhaustive H_p evaluation is limited to p^2 <= 10^7")
    c0, c1 = F.modulus[0], F.modulus[1]
    coeffs = [int(c) for c in reversed(hp_coefficients(p))]
    # int32 holds 3p^2 for every p allowed here; small chunks stay in cache
    roots = []
    chunk = 1 << 14
    for start in range(0, p * p, chunk):
        idx = np.arange(start, min(p * p, start + chunk), dtype=np.int32)
        l0, l1 = idx % p, idx // p
        a0 = np.zeros_like(l0)
        a1 = np.zeros_like(l0)
        for c in coeffs:
            t2 = a1 * l1 % p
            n0 = (a0 * l0 - c0 * t2 + c) % p
            n1 = (a0 * l1 + a1 * l0 - c1 * t2) % p if c1 else (a0 * l1 + a1 * l0) % p
            a0, a1 = n0, n1
        roots.extend(int(r) for r in idx[(a0 == 0) & (a1 == 0)])
    return {j_from_lambda(F([r % p, r // p])) for r in roots}


def enumerate_ss(p: int):
    """Sorted supersingular j-invariants and their weights 2w_j.

    Found by a 2-isogeny BFS from the seed and cross-checked against the
    j-images of the roots of H_p."""
    _check_p(p)
    js, ws = _enumerate_ss(p)
    return list(js), list(ws)


@lru_cache(maxsize=None)
def _enumerate_ss(p):
    seed = seed_ss_j(p)
    seen = {seed}
    queue = deque([seed])
    while queue:
        j = queue.popleft()
        E = canonical_model(j)
        for T in two_torsion(E):
            j2 = velu(E, T).codomain.j_invariant()
            if j2 not in seen:
                seen.add(j2)
                queue.append(j2)
    if len(seen) != class_number(p):
        raise InternalError("BFS found %d vertices, class number is %d" % (len(seen), class_number(p)))
    if seen != hp_root_js(p):
        raise InternalError("BFS and H_p roots disagree at p = %d" % p)
    js = tuple(sorted(seen, key=FieldElem.key))
    return js, tuple(aut_weight(j) for j in js)


@dataclass(frozen=True)
class SSPolynomial:
    p: int
    coefficients: tuple  # over F_p, low degree first
    factors: tuple  # monic integer coefficient tuples, low degree first

    def text(self) -> str:
        return "".join(factor_text(f, self.p) for f in self.factors)


def factor_text(f, p):
    """Render a monic factor with coefficients in (-p/2, p/2]."""
    def sym(c):
        c %= p
        return c - p if c > p // 2 else c
    if len(f) == 2 and f[0] % p == 0:
        return "x"
    terms = ["x" if len(f) == 2 else "x^2"]
    if len(f) == 3:
        c = sym(f[1])
        if c:
            terms.append(("+" if c > 0 else "-") + ("" if abs(c) == 1 else str(abs(c))) + "x")
    c = sym(f[0])
    if c:
        terms.append(("+" if c > 0 else "-") + str(abs(c)))
    return "(" + "".join(terms) + ")"


def ss_polynomial(p: int) -> SSPolynomial:
    js, _ = enumerate_ss(p)
    F = make_fp2(p)
    coeffs = poly_from_roots(js, F)
    for c in coeffs:
        if not c.is_prime_subfield():
            raise InternalError("S_p has a coefficient outside F_p")
    lin, quad, done = [], [], set()
    for j in js:
        if j in done:
            continue
        jp = frobenius(j)
        if jp == j:
            lin.append(((-j).to_int(), 1))
            done.add(j)
        else:
            s = (j + jp).to_int()
            n = (j * jp).to_int()
            quad.append((n, (-s) % p, 1))
            done.update((j, jp))
    lin.sort(key=lambda f: (-f[0]) % p)
    quad.sort()
    return SSPolynomial(p, tuple(c.to_int() for c in coeffs), tuple(lin + quad))


@dataclass
class SSGraph:
    p: int
    ell: int
    vertices: list
    weights: list
    adjacency: list = field(default_factory=list)

    @property
    def h(self):
        return len(self.vertices)

    def index(self, j):
        return self._index[j]

    def __post_init__(self):
        self._index = {j: i for i, j in enumerate(self.vertices)}

    def loops(self) -> int:
        return sum(self.adjacency[i][i] for i in range(self.h))

    def to_json(self) -> str:
        edges = [[i, k, m] for i, row in enumerate(self.adjacency) for k, m in enumerate(row) if m]
        return json.dumps({
            "p": self.p,
            "ell": self.ell,
            "vertices": [{"j": str(j), "w2": w} for j, w in zip(self.vertices, self.weights)],
            "edges": edges,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        F = make_fp2(d["p"])
        vs = [F.parse(v["j"]) for v in d["vertices"]]
        A = [[0] * len(vs) for _ in vs]
        for i, k, m in d["edges"]:
            A[i][k] = m
        return cls(d["p"], d["ell"], vs, [v["w2"] for v in d["vertices"]], A)

    def to_dot(self) -> str:
        lines = ["digraph G_%d_%d {" % (self.p, self.ell)]
        for i, j in enumerate(self.vertices):
            lines.append('  v%d [label="%s"];' % (i, j))
        for i, row in enumerate(self.adjacency):
            for k, m in enumerate(row):
                for _ in range(m):
                    lines.append("  v%d -> v%d;" % (i, k))
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(p: int, ell: int) -> SSGraph:
    _check_p(p)
    if not is_prime(ell) or ell == p or ell > 13:
        raise ParameterError("ell must be a prime <= 13 different from p")
    js, ws = enumerate_ss(p)
    g = SSGraph(p, ell, js, ws)
    A = [[0] * len(js) for _ in js]
    for i, j in enumerate(js):
        E = canonical_model(j)
        for K in subgroups_of_order(E, ell):
            j2 = velu(E, K).codomain.j_invariant()
            k = g._index.get(j2)
            if k is None:
                raise InternalError("codomain j = %s is not a vertex" % j2)
            A[i][k] += 1
    g.adjacency = A
    check_graph(g)
    return g


def check_graph(g: SSGraph):
    for i, row in enumerate(g.adjacency):
        if sum(row) != g.ell + 1:
            raise InternalError("row %d sums to %d" % (i, sum(row)))
        for k in range(g.h):
            if row[k] * g.weights[k] != g.adjacency[k][i] * g.weights[i]:
                raise InternalError("weighted symmetry fails at (%d, %d)" % (i, k))


def phi2_neighbors(j: FieldElem) -> list:
    """Roots with multiplicity of the classical modular polynomial Phi_2(j, X)."""
    F = j.ctx
    c2 = 1488 * j - 162000 - j * j
    c1 = 1488 * j * j + 40773375 * j + 8748000000
    c0 = j ** 3 - 162000 * j * j + 8748000000 * j - 157464000000000
    return poly_roots_mult([c0, c1, c2, F.one])


def phi2(j1, j2):
    return (j1 ** 3 + j2 ** 3 + 1488 * (j1 * j1 * j2 + j2 * j2 * j1)
            - 162000 * (j1 * j1 + j2 * j2) - j1 * j1 * j2 * j2
            + 8748000000 * (j1 + j2) + 40773375 * j1 * j2 - 157464000000000)


def spine(g: SSGraph) -> list:
    return [i for i, j in enumerate(g.vertices) if frobenius(j) == j]


def frobenius_involution(g: SSGraph) -> list:
    pi = [g.index(frobenius(j)) for j in g.vertices]
    A = g.adjacency
    for i in range(g.h):
        if pi[pi[i]] != i:
            raise InternalError("Frobenius is not an involution")
        for k in range(g.h):
            if A[pi[i]][pi[k]] != A[i][k]:
                raise InternalError("Frobenius is not a graph automorphism")
    return pi


@dataclass(frozen=True)
class SpectralReport:
    trivial_mult: int
    max_nontrivial_abs: float
    has_minus_trivial: bool
    eigenvalues: tuple

    def ramanujan(self, ell):
        return self.max_nontrivial_abs <= 2 * ell ** 0.5 + 1e-9


def spectral_report(g: SSGraph, tol: float = 1e-9) -> SpectralReport:
    import numpy as np

    A = np.array(g.adjacency, dtype=float)
    w = np.array(g.weights, dtype=float)
    M = A * np.sqrt(w)[None, :] / np.sqrt(w)[:, None]
    if np.max(np.abs(M - M.T)) > 1e-12:
        raise InternalError("symmetrised adjacency is not symmetric")
    ev = np.sort(np.linalg.eigvalsh((M + M.T) / 2))
    top = g.ell + 1
    trivial = int(np.sum(np.abs(ev - top) <= tol))
    rest = ev[np.abs(ev - top) > tol]
    mx = float(np.max(np.abs(rest))) if len(rest) else 0.0
    neg = bool(np.any(np.abs(ev + top) <= tol))
    return SpectralReport(trivial, mx, neg, tuple(float(x) for x in ev))


@dataclass(frozen=True)
class AutomorphismReport:
    order: int
    generators: tuple
    elements: tuple


def essential_automorphisms(g: SSGraph, max_h: int = 40) -> AutomorphismReport:
    """All vertex permutations preserving the adjacency matrix."""
    h = g.h
    if h > max_h:
        raise CapacityError("automorphism search is limited to h <= %d" % max_h)
    A = g.adjacency
    inv = [(g.weights[i], A[i][i], tuple(sorted(A[i])),
            tuple(sorted(A[k][i] for k in range(h)))) for i in range(h)]
    cands = [[k for k in range(h) if inv[k] == inv[i]] for i in range(h)]
    found = []
    perm = [None] * h
    used = [False] * h

    def extend(i):
        if i == h:
            found.append(tuple(perm))
            return
        for k in cands[i]:
            if used[k]:
                continue
            ok = all(A[i][t] == A[k][perm[t]] and A[t][i] == A[perm[t]][k] for t in range(i))
            if ok and A[i][i] == A[k][k]:
                perm[i], used[k] = k, True
                extend(i + 1)
                used[k] = False
        perm[i] = None

    extend(0)
    group = {tuple(range(h))}
    gens = []
    for sigma in sorted(found):
        if sigma not in group:
            gens.append(sigma)
            group = _closure(gens, h)
    return AutomorphismReport(len(found), tuple(gens), tuple(sorted(found)))


def _closure(gens, h):
    group = {tuple(range(h))}
    frontier = list(group)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                c = tuple(g[a[i]] for i in range(h))
                if c not in group:
                    group.add(c)
                    new.append(c)
        frontier = new
    return group


def phi2_row(g: SSGraph, i: int) -> Counter:
    return Counter(g.index(r) for r in phi2_neighbors(g.vertices[i]))


def find_permutation(A, B):
    """A permutation s with A[i][j] == B[s[i]][s[j]] for all i, j, or None."""
    h = len(A)
    if len(B) != h:
        return None

    def sig(M, i):
        return (M[i][i], tuple(sorted(M[i])), tuple(sorted(M[k][i] for k in range(h))))

    sa = [sig(A, i) for i in range(h)]
    sb = [sig(B, i) for i in range(h)]
    cands = [[k for k in range(h) if sb[k] == sa[i]] for i in range(h)]
    perm = [None] * h
    used = [False] * h

    def extend(i):
        if i == h:
            return True
        for k in cands[i]:
            if used[k]:
                continue
            if all(A[i][t] == B[k][perm[t]] and A[t][i] == B[perm[t]][k] for t in range(i)):
                perm[i], used[k] = k, True
                if extend(i + 1):
                    return True
                used[k] = False
        perm[i] = None
        return False

    return tuple(perm) if extend(0) else None
