"""Exact integer lattice helpers: Hermite and Smith forms, determinants and
Fincke-Pohst enumeration of short vectors of a positive definite form."""

import math
from fractions import Fraction

from .errors import CapacityError, ParameterError

ENUM_CAP = 10 ** 8


def hnf(rows):
    """Row Hermite normal form; zero rows are dropped.

    Pivots are positive and entries above a pivot are reduced into
    [0, pivot)."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            pr = A[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // pr[c]
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], pr)]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if r < m and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
            pr = A[r]
            for i in range(r):
                q = A[i][c] // pr[c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], pr)]
            r += 1
            if r == m:
                break
    return [tuple(row) for row in A[:r]]


def smith_invariants(rows):
    """Nonzero invariant factors d1 | d2 | ... of the row span."""
    A = [list(r) for r in hnf(rows)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    out = []
    t = 0
    while t < m:
        # move a smallest nonzero entry of the trailing block to (t, t)
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        A[t], A[i0] = A[i0], A[t]
        for row in A:
            row[t], row[j0] = row[j0], row[t]
        done = False
        while not done:
            done = True
            piv = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // piv
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if not done:
                entries = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                entries += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i0, j0 = min(entries)
                A[t], A[i0] = A[i0], A[t]
                for row in A:
                    row[t], row[j0] = row[j0], row[t]
                continue
            # divisibility condition on the trailing block
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv]
            if bad:
                i, _ = bad[0]
                A[t] = [a + b for a, b in zip(A[t], A[i])]
                done = False
        out.append(abs(A[t][t]))
        t += 1
    return out


def span_rank_index(rows, n):
    """(rank, index) of the integer span inside Z^n; index is None if rank < n."""
    H = hnf(rows)
    if len(H) < n:
        return len(H), None
    return n, math.prod(smith_invariants(H))


def det(M):
    """Exact determinant of a square matrix of ints or Fractions (Bareiss)."""
    n = len(M)
    if any(isinstance(x, Fraction) for row in M for x in row):
        A = [[Fraction(x) for x in row] for row in M]
        d = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c]), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                d = -d
            d *= A[c][c]
            for r in range(c + 1, n):
                f = A[r][c] / A[c][c]
                if f:
                    A[r] = [a - f * b for a, b in zip(A[r], A[c])]
        return d
    A = [list(row) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((r for r in range(k + 1, n) if A[r][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def inverse(M):
    """Exact inverse over the rationals."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            raise ParameterError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [a * inv for a in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def is_positive_definite(M):
    n = len(M)
    return all(det([row[:k] for row in M[:k]]) > 0 for k in range(1, n + 1))


def qform(M, c):
    return sum(c[i] * sum(M[i][j] * c[j] for j in range(len(c))) for i in range(len(c)))


def _cholesky(M):
    n = len(M)
    q = [[float(M[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        if q[i][i] <= 0:
            raise ParameterError("form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def estimated_count(M, bound):
    n = len(M)
    d = float(det(M))
    if d <= 0:
        raise ParameterError("form is not positive definite")
    ball = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    return ball * float(bound) ** (n / 2) / math.sqrt(d)


def enumerate_short(M, bound, cap: int = ENUM_CAP):
    """All c != 0 with c^T M c <= bound, as (c, value) pairs.

    M is a symmetric positive definite matrix of ints (or Fractions); the
    result is sorted lexicographically on c."""
    n = len(M)
    if bound <= 0:
        return []
    if estimated_count(M, bound) > cap:
        raise CapacityError("enumeration would visit more than %d vectors" % cap)
    q = _cholesky(M)
    fb = float(bound)
    eps = 1e-9 * max(1.0, fb)
    out = []
    c = [0] * n
    nodes = [0]
    diag = [q[i][i] for i in range(n)]

    def rec(i, rem):
        center = 0.0
        for j in range(i + 1, n):
            center -= q[i][j] * c[j]
        r = math.sqrt(max(rem, 0.0) / diag[i]) + 1e-7
        lo = math.ceil(center - r)
        hi = math.floor(center + r)
        nodes[0] += hi - lo + 1
        if nodes[0] > cap:
            raise CapacityError("enumeration exceeded %d nodes" % cap)
        for x in range(lo, hi + 1):
            t = diag[i] * (x - center) ** 2
            if t > rem + eps:
                continue
            c[i] = x
            if i == 0:
                if any(c):
                    v = qform(M, c)
                    if 0 < v <= bound:
                        out.append((tuple(c), v))
            else:
                rec(i - 1, rem - t)
        c[i] = 0

    rec(n - 1, fb)
    out.sort()
    return out
