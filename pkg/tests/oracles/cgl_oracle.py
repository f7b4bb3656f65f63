"""Stand-alone step-by-step CGL walk used to freeze hash test vectors.

Deliberately shares no code with the package: F_{p^2} elements are plain
(hi, lo) pairs meaning hi*u + lo with u^2 = c (c = -1 when p = 3 mod 4,
else the least nonresidue), roots are found by scanning the whole field,
and the model E(j) is the lexicographically least (a, b) with j(E) = j and
(p+1)^2 points, found by direct point counting.

Run:  python3 cgl_oracle.py  -> writes src/isg/data/cgl_p101.json
"""

import itertools
import json
import os
import sys


class F:
    def __init__(self, p):
        self.p = p
        if p % 4 == 3:
            self.c = p - 1
        else:
            c = 2
            while pow(c, (p - 1) // 2, p) != p - 1:
                c += 1
            self.c = c
        self.elems = [(hi, lo) for hi in range(p) for lo in range(p)]   # lexicographic
        self.squares = {}
        for x in self.elems:
            self.squares.setdefault(self.mul(x, x), []).append(x)

    def add(self, x, y):
        return ((x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p)

    def sub(self, x, y):
        return ((x[0] - y[0]) % self.p, (x[1] - y[1]) % self.p)

    def mul(self, x, y):
        p = self.p
        hi = (x[0] * y[1] + x[1] * y[0]) % p
        lo = (x[1] * y[1] + self.c * x[0] * y[0]) % p
        return (hi, lo)

    def k(self, n):
        return (0, n % self.p)

    def pow(self, x, n):
        r = (0, 1)
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r

    def inv(self, x):
        assert x != (0, 0)
        return self.pow(x, self.p * self.p - 2)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def chi(self, x):
        if x == (0, 0):
            return 0
        return 1 if x in self.squares else -1

    def text(self, x):
        return "%d*u+%d" % x if x[0] else "%d" % x[1]


def j_of(Fq, a, b):
    a3 = Fq.mul(Fq.mul(a, a), a)
    num = Fq.mul(Fq.k(1728 * 4), a3)
    den = Fq.add(Fq.mul(Fq.k(4), a3), Fq.mul(Fq.k(27), Fq.mul(b, b)))
    return Fq.div(num, den)


def count(Fq, a, b):
    n = 1
    for x in Fq.elems:
        f = Fq.add(Fq.add(Fq.mul(Fq.mul(x, x), x), Fq.mul(a, x)), b)
        n += 1 + Fq.chi(f)
    return n


_models = {}


def model(Fq, j):
    """Least (a, b) in lexicographic order with j(E) = j and #E = (p+1)^2."""
    if j in _models:
        return _models[j]
    target = (Fq.p + 1) ** 2
    zero = (0, 0)
    cands = []
    if j == zero:
        cands = [(zero, b) for b in Fq.elems if b != zero]
    elif j == Fq.k(1728):
        cands = [(a, zero) for a in Fq.elems if a != zero]
    else:
        # b^2 = 4 a^3 (1728 - j) / (27 j)
        r = Fq.div(Fq.mul(Fq.k(4), Fq.sub(Fq.k(1728), j)), Fq.mul(Fq.k(27), j))
        for a in Fq.elems:
            if a == zero:
                continue
            t = Fq.mul(r, Fq.mul(Fq.mul(a, a), a))
            for b in sorted(Fq.squares.get(t, [])):
                cands.append((a, b))
    for a, b in cands:
        assert j_of(Fq, a, b) == j
        if count(Fq, a, b) == target:
            _models[j] = (a, b)
            return a, b
    raise AssertionError("no model")


def two_torsion_x(Fq, a, b):
    return [x for x in Fq.elems
            if Fq.add(Fq.add(Fq.mul(Fq.mul(x, x), x), Fq.mul(a, x)), b) == (0, 0)]


def walk(Fq, j0, bits):
    a, b = model(Fq, j0)
    xs = two_torsion_x(Fq, a, b)
    assert len(xs) == 3
    marked = xs[0]
    trace = [Fq.text(j0)]
    for bit in bits:
        others = [x for x in xs if x != marked]
        x0 = others[int(bit)]
        t = Fq.add(Fq.mul(Fq.k(3), Fq.mul(x0, x0)), a)
        w = Fq.mul(x0, t)
        a1 = Fq.sub(a, Fq.mul(Fq.k(5), t))
        b1 = Fq.sub(b, Fq.mul(Fq.k(7), w))
        # image of E[2]: the marked point (any non-kernel 2-torsion point works)
        X = Fq.add(marked, Fq.div(t, Fq.sub(marked, x0)))
        j1 = j_of(Fq, a1, b1)
        a2, b2 = model(Fq, j1)
        # (x, y) -> (u x, ...) with u^2 a1 = a2 and u^3 b1 = b2; take the least u
        us = [u for u in Fq.elems if u != (0, 0)
              and Fq.mul(Fq.mul(u, u), a1) == a2
              and Fq.mul(Fq.mul(Fq.mul(u, u), u), b1) == b2]
        assert us
        u = min(us)
        marked = Fq.mul(u, X)
        a, b = a2, b2
        xs = two_torsion_x(Fq, a, b)
        assert marked in xs and len(xs) == 3
        trace.append(Fq.text(j1))
    return trace


def main(out=None):
    p = 101
    Fq = F(p)
    j0 = (0, 0)   # 101 = 2 mod 3, so j = 0 is supersingular
    msgs = ["".join(t) for n in range(0, 5) for t in itertools.product("01", repeat=n)]
    msgs += ["01101001", "11110000", "000000000000", "101010101010", "0110100110010110",
             "1111111111111111", "0010011100101101"]
    vectors = []
    for m in msgs:
        tr = walk(Fq, j0, m)
        vectors.append({"bits": m, "j": tr[-1], "trace": tr})
    data = {"p": p, "modulus_c": Fq.c, "j0": Fq.text(j0), "vectors": vectors}
    out = out or os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "..", "src", "isg", "data", "cgl_p101.json")
    with open(out, "w") as fh:
        json.dump(data, fh, indent=1)
    return data


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
