"""The twelve acceptance checks, runnable from pytest or `isg accept`.

Each check returns (ok, detail).  run_all() times them and applies the
runtime budgets; a check that is correct but over budget fails.
"""

import itertools
import json
import os
import random
import re
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import latgen, proto, quat, ssgraph
from .errors import ParameterError
from .ff import is_prime, make_fp2

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")

# Supersingular polynomials as displayed in the source text.
DISPLAYED_SP = {
    37: "(x-8)(x^2-6x-6)",
    47: "x(x-1728)(x-9)(x-10)(x+3)",
    73: "(x-9)(x+17)(x^2-5x+9)(x^2-16x+8)",
    101: "x(x-3)(x-21)(x-57)(x-59)(x-64)(x-66)(x^2+27x+54)",
}

# The drawn graphs G(101, 2) and G(101, 3), transcribed edge by edge ("a" and "abar" are the roots of x^2+27x+54).
DRAWN_101 = {
    2: {"21": ["21", "abar", "a"], "a": ["66", "21", "57"], "abar": ["57", "21", "66"],
        "66": ["0", "abar", "a"], "57": ["64", "a", "abar"], "0": ["66", "66", "66"],
        "64": ["57", "3", "3"], "3": ["59", "64", "64"], "59": ["59", "59", "3"]},
    3: {"21": ["3", "59", "21", "21"], "a": ["64", "abar", "abar", "59"],
        "abar": ["a", "a", "59", "64"], "66": ["66", "57", "3", "3"],
        "57": ["66", "59", "57", "57"], "0": ["0", "64", "64", "64"],
        "64": ["0", "3", "abar", "a"], "3": ["64", "21", "66", "66"],
        "59": ["57", "21", "abar", "a"]},
}


def parse_factored(text, p):
    """'(x-8)(x^2-6x-6)' -> sorted list of monic coefficient tuples mod p (low degree first)."""
    out = []
    for tok in re.findall(r"\(([^)]*)\)|(x)", text.replace(" ", "")):
        body = tok[0] or tok[1]
        coeffs = {}
        for sign, c, xpow in re.findall(r"([+-]?)(\d*)(x(?:\^\d+)?)?", body):
            if not c and not xpow:
                continue
            deg = 0 if not xpow else (int(xpow[2:]) if "^" in xpow else 1)
            val = int(c) if c else 1
            coeffs[deg] = coeffs.get(deg, 0) + (-val if sign == "-" else val)
        d = max(coeffs)
        out.append(tuple(coeffs.get(i, 0) % p for i in range(d + 1)))
    return sorted(out)


def _ac01():
    ssgraph._enumerate_ss.cache_clear()
    bad = []
    primes = [p for p in range(5, 501) if is_prime(p)]
    for p in primes:
        js, _ = ssgraph.enumerate_ss(p)   # raises if BFS and H_p roots disagree
        if len(js) != ssgraph.class_number(p):
            bad.append(p)
    return not bad, "%d primes, BFS = H_p roots = formula%s" % (len(primes), "; bad %s" % bad if bad else "")


def _ac02():
    """Byte comparison of the rendered factorizations with the displayed ones.

    The displayed strings do not follow a single residue convention (x+17 at
    p = 73 but x-57 at p = 101, and an unreduced x-1728 at p = 47), so the
    detail also says whether the factors agree as polynomials mod p."""
    lines = []
    ok = True
    for p, text in DISPLAYED_SP.items():
        S = ssgraph.ss_polynomial(p)
        mine = sorted(tuple(c % p for c in f) for f in S.factors)
        same = mine == parse_factored(text, p) and len(S.coefficients) - 1 == ssgraph.class_number(p)
        exact = S.text() == text
        ok &= exact
        if exact:
            lines.append("S_%d = %s" % (p, text))
        else:
            lines.append("S_%d renders as %s, displayed %s (%s)" % (
                p, S.text(), text, "same factors mod p" if same else "DIFFERENT factors"))
    return ok, "; ".join(lines)


def _drawing_check(g, table, alpha):
    labels = {}
    for i, j in enumerate(g.vertices):
        if j.is_prime_subfield():
            labels[str(j)] = i
    labels["a"], labels["abar"] = g.index(alpha), g.index(alpha ** g.p)
    if set(labels) != set(table):
        return False
    for src, dsts in table.items():
        row = Counter(dict((k, v) for k, v in enumerate(g.adjacency[labels[src]]) if v))
        if row != Counter(labels[d] for d in dsts):
            return False
    return True


def _ac03():
    F = make_fp2(101)
    roots = [r for r in F.elements() if r * r + 27 * r + 54 == 0]
    expect = {F(v) for v in (0, 3, 21, 57, 59, 64, 66)} | set(roots)
    notes = []
    ok = len(roots) == 2
    for ell in (2, 3):
        g = ssgraph.build_graph(101, ell)
        ok &= g.h == 9 and set(g.vertices) == expect
        ok &= any(_drawing_check(g, DRAWN_101[ell], a) for a in roots)
        pi = ssgraph.frobenius_involution(g)
        ok &= pi[g.index(roots[0])] == g.index(roots[1])
        notes.append("G(101,%d) matches" % ell)
    g2 = ssgraph.build_graph(101, 2)
    i0, i66, i21 = g2.index(F(0)), g2.index(F(66)), g2.index(F(21))
    ok &= g2.adjacency[i0][i66] == 3 and g2.adjacency[i66][i0] == 1 and g2.adjacency[i21][i21] == 1
    g3 = ssgraph.build_graph(101, 3)
    ok &= g3.adjacency[g3.index(F(21))][g3.index(F(21))] == 2
    ok &= g3.adjacency[g3.index(F(57))][g3.index(F(57))] == 2
    return ok, ", ".join(notes) if ok else "mismatch with the drawn graphs"


def _ac04():
    bad, worst = [], 0.0
    count = 0
    for p in range(5, 301):
        if not is_prime(p):
            continue
        for ell in (2, 3):
            if ell == p:
                continue
            g = ssgraph.build_graph(p, ell)
            r = ssgraph.spectral_report(g)
            count += 1
            if r.trivial_mult != 1 or not r.ramanujan(ell) or r.has_minus_trivial:
                bad.append((p, ell))
            worst = max(worst, r.max_nontrivial_abs / (2 * ell ** 0.5))
    return not bad, "%d graphs, max |lambda|/2sqrt(l) = %.4f%s" % (count, worst, "; bad %s" % bad if bad else "")


def _ac05():
    D = quat.deuring(103)
    out = []
    ok = True
    for ell in (2, 3):
        B = D.brandt_matrix(ell).as_int()
        A = ssgraph.build_graph(103, ell).adjacency
        perm = ssgraph.find_permutation(B, A)
        ok &= perm is not None
        out.append("B(%d) ~ A: %s" % (ell, perm))
    return ok, "; ".join(out)


def _ac06():
    rep = quat.brandt_identities(103)
    B2 = quat.deuring(103).brandt_matrix(2)
    loops = ssgraph.build_graph(103, 2).loops()
    ok = rep.ok and B2.trace() == loops
    failed = [name for name, good, _ in rep.checks if not good]
    return ok, "%d identities%s; Tr B(2) = %s, loops = %d" % (
        len(rep.checks), "" if not failed else " failed: %s" % failed, B2.trace(), loops)


def sigma_p(m, p):
    return sum(d for d in range(1, m + 1) if m % d == 0 and d % p)


def _ac07():
    p = 103
    D = quat.deuring(p)
    th = D.thetas(30)
    const = sum(Fraction(th[0, j][0], D.units[j]) for j in range(D.h))
    ok = const == Fraction(p - 1, 24) and D.mass() == Fraction(17, 4)
    for m in range(1, 31):
        ok &= sum(Fraction(th[0, j][m], D.units[j]) for j in range(D.h)) == sigma_p(m, p)
    return ok, "constant term %s, mass %s, coefficients 1..30 = sigma(m)_p" % (const, D.mass())


def _ac08():
    out, ok = [], True
    for p in (103, 167, 191):
        r = quat.theta_rigidity(p, p)
        ok &= r.ok
        out.append("p=%d h=%d %s" % (p, r.h, "ok" if r.ok else "violations %s" % r.violations))
    return ok, "; ".join(out)


def _ac09():
    ok = True
    D = quat.deuring(103)
    for c in range(D.h):
        r = latgen.order_profile(103, c, 2, 2 ** 10)
        ok &= r.generated and r.index == 1
    E = latgen.e8()
    ok &= len(latgen.vectors_of_norm(E, 2)) == 240
    for s in (2, 4, 6, 8, 10):
        ok &= latgen.generated_by_norms(E, [s], s).generated
    ok &= all(latgen.local_witness_2(t) == 1 for t in range(-50, 50))
    grid = [(x, y, z) for x in range(-2, 3) for y in range(-2, 3) for z in range(-2, 2)]
    ok &= len(grid) == 100 and all(latgen.local_witness_p(*g) == 2 * g[2] for g in grid)
    return ok, "9 orders by 2^k, E8 by s in {2,...,10}, witness determinants on 100-point grids"


def load_cgl_vectors():
    with open(os.path.join(DATA_DIR, "cgl_p101.json")) as fh:
        return json.load(fh)


def _ac10():
    p = 101
    data = load_cgl_vectors()
    ok = all(str(proto.cgl_hash(p, v["bits"])) == v["j"] for v in data["vectors"])
    n_fix = len(data["vectors"])
    ok &= proto.cgl_hash(p, "0110") == proto.cgl_hash(p, "0110")
    rng = random.Random(7)
    g = ssgraph.build_graph(p, 2)
    for _ in range(20):
        b1 = "".join(rng.choice("01") for _ in range(rng.randrange(8)))
        b2 = "".join(rng.choice("01") for _ in range(rng.randrange(8)))
        ok &= proto.cgl_walk(proto.cgl_walk(proto.cgl_init(p), b1), b2).j == proto.cgl_hash(p, b1 + b2)
        st = proto.cgl_init(p)
        for b in b1 + b2:
            nxt = proto.cgl_step(st, b)
            ok &= g.adjacency[g.index(st.j)][g.index(nxt.j)] > 0
            st = nxt
    hist = Counter(proto.cgl_hash(p, "".join(t)) for t in itertools.product("01", repeat=12))
    ok &= len(hist) == 9
    ratio = max(hist.values()) / min(hist.values())
    return ok, "%d fixtures, 2^12 messages hit %d vertices, max/min bucket %.2f" % (n_fix, len(hist), ratio)


def _ac11():
    s = proto.sidh_setup(2, 4, 3, 3)
    rng = random.Random(2024)
    ok = s.p == 431 and s.f == 1
    n = 0
    while n < 100:
        a = (rng.randrange(16), rng.randrange(16))
        b = (rng.randrange(27), rng.randrange(27))
        if a[0] % 2 == 0 and a[1] % 2 == 0 or a[0] % 3 == 0 and a[1] % 3 == 0:
            continue
        try:
            ja, jb = proto.sidh_exchange(s, a, b)
        except ParameterError:
            # scalars whose combination is not of full order are rejected by design
            continue
        n += 1
        ok &= ja == jb == proto.sidh_direct(s, a, b)
    return ok, "p = %d, %d secret pairs agree three ways" % (s.p, n)


def _ac12():
    out, ok = [], True
    for p in (101, 103, 127):
        g = ssgraph.build_graph(p, 2)
        r = ssgraph.essential_automorphisms(g)
        fr = tuple(ssgraph.frobenius_involution(g))
        same = set(r.elements) == {tuple(range(g.h)), fr}
        ok &= same
        out.append("p=%d |Aut| = %d%s" % (p, r.order, "" if same else " (not {Id, Fr})"))
    return ok, "; ".join(out)


@dataclass(frozen=True)
class Criterion:
    cid: str
    title: str
    budget: float    # seconds, None for no budget
    fn: object


CRITERIA = [
    Criterion("AC01", "class numbers p <= 500", 60, _ac01),
    Criterion("AC02", "supersingular polynomials", None, _ac02),
    Criterion("AC03", "labeled graphs at p = 101", None, _ac03),
    Criterion("AC04", "Ramanujan spectra p <= 300", 120, _ac04),
    Criterion("AC05", "Deuring cross-validation", None, _ac05),
    Criterion("AC06", "Brandt identities", None, _ac06),
    Criterion("AC07", "Eisenstein identity", None, _ac07),
    Criterion("AC08", "theta rigidity", 180, _ac08),
    Criterion("AC09", "generation theorems", None, _ac09),
    Criterion("AC10", "CGL hash", 30, _ac10),
    Criterion("AC11", "toy SIDH", 60, _ac11),
    Criterion("AC12", "essential automorphisms", None, _ac12),
]


@dataclass
class Result:
    cid: str
    title: str
    ok: bool
    seconds: float
    detail: str

    def line(self):
        return "%s %s %6.1fs  %s: %s" % (self.cid, "PASS" if self.ok else "FAIL", self.seconds,
                                         self.title, self.detail)


def run_one(cid):
    c = next(c for c in CRITERIA if c.cid == cid)
    t = time.perf_counter()
    try:
        ok, detail = c.fn()
    except Exception as e:          # a crash is a failure of the criterion, not of the runner
        ok, detail = False, "%s: %s" % (type(e).__name__, e)
    dt = time.perf_counter() - t
    if c.budget is not None and dt > c.budget:
        ok, detail = False, detail + " (over the %ds budget)" % c.budget
    return Result(c.cid, c.title, bool(ok), dt, detail)


def run_all(ids=None, threads=None):
    ids = ids or [c.cid for c in CRITERIA]
    threads = threads or int(os.environ.get("ISG_THREADS", "1"))
    if threads > 1:
        with ProcessPoolExecutor(threads) as ex:
            return list(ex.map(run_one, ids))
    return [run_one(i) for i in ids]
