"""Brute-force reference implementations, written independently of the package.

Everything here works with plain coefficient lists over a prime field F_p
and complex floating point, so it shares no code path with the exact
implementation under test.
"""

import cmath
import itertools


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def pmod(a, m, p):
    """a mod m over F_p, m nonzero (lists, ascending)."""
    a, m = trim(a), trim(m)
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        s = len(a) - len(m)
        for i, x in enumerate(m):
            a[s + i] = (a[s + i] - c * x) % p
        a = trim(a)
    return a


def pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def padd(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def pgcd_is_one(a, b, p):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pmod(a, b, p)
    return len(a) == 1


def e(p, k):
    return cmath.exp(2j * cmath.pi * (k % p) / p)


def psi_mod(x, r, p):
    """psi(x / r) for monic r: e_p of the t^(deg r - 1) coefficient of x mod r."""
    d = len(trim(r)) - 1
    if d == 0:
        return 1.0
    z = pmod(x, r, p)
    return e(p, z[d - 1] if len(z) >= d else 0)


def residues(r, p):
    d = len(trim(r)) - 1
    for digits in itertools.product(range(p), repeat=d):
        yield trim(list(digits))


def units(r, p):
    for x in residues(r, p):
        if x and pgcd_is_one(x, r, p):
            yield x


def inverse(x, r, p):
    for y in residues(r, p):
        if pmod(pmul(x, y, p), r, p) == [1]:
            return y
    raise ValueError("not a unit")


def kloosterman(r, m, n, p):
    """sum over units x mod r of psi((m x + n / x) / r)."""
    if len(trim(r)) == 1:
        return 1.0
    return sum(psi_mod(padd(pmul(m, x, p), pmul(n, inverse(x, r, p), p), p), r, p) for x in units(r, p))


def gauss(r, p):
    return sum(psi_mod(pmul(x, x, p), r, p) for x in residues(r, p))


def field_kloosterman(p, a):
    return sum(e(p, x + a * pow(x, p - 2, p)) for x in range(1, p))


def q3_form_value(x, p=3):
    """x1^2 + x2^2 - (t-1) x3^2 - (t-1) x4^2 over F_3 (nu = -1)."""
    s = [1, p - 1]  # -(t-1) = 1 - t
    acc = []
    for i, xi in enumerate(x):
        sq = pmul(xi, xi, p)
        acc = padd(acc, sq if i < 2 else pmul(s, sq, p), p)
    return acc


def count_q3(f, g, lam, R):
    """#{y : F(lam + g y) = f, deg y_i < R} by enumeration, q = 3."""
    f = trim(f)
    ys = [trim(list(d)) for d in itertools.product(range(3), repeat=max(R, 0))]
    xs = [[padd(l, pmul(g, y, 3), 3) for y in ys] for l in lam]
    n = 0
    for x in itertools.product(*xs):
        if q3_form_value(x) == f:
            n += 1
    return n


def rep_count_q3(f, mod, lam, v_mod):
    """#{x mod `mod` : F(x) = f mod `mod`, x = lam mod v_mod}, q = 3."""
    target = pmod(f, mod, 3)
    res = list(residues(mod, 3))
    ok = [[x for x in res if pmod(padd(x, [(-c) % 3 for c in l], 3), v_mod, 3) == []] for l in lam]
    n = 0
    for x in itertools.product(*ok):
        if pmod(q3_form_value(x), mod, 3) == target:
            n += 1
    return n


def morgenstern_q3_quadratic(g):
    """Vertex count and identity eccentricity of the q = 3 Morgenstern Cayley
    graph for a monic irreducible quadratic g = t^2 + g1 t + g0, nu = -1.

    Arithmetic is in F_9 = F_3[t]/(g) with elements (a, b) = a + b t.
    """
    g0, g1 = g[0], g[1]

    def mul(x, y):
        a = x[0] * y[0]
        b = x[0] * y[1] + x[1] * y[0]
        c = x[1] * y[1]  # c t^2 = c (-g1 t - g0)
        return ((a - c * g0) % 3, (b - c * g1) % 3)

    def add(x, y):
        return ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3)

    def neg(x):
        return ((-x[0]) % 3, (-x[1]) % 3)

    elems = [(a, b) for a in range(3) for b in range(3)]
    inv = {x: y for x in elems for y in elems if mul(x, y) == (1, 0)}
    i = min(x for x in elems if mul(x, x) == (2, 0))
    tm1 = (2, 1)  # t - 1

    def mmul(A, B):
        return (
            add(mul(A[0], B[0]), mul(A[1], B[2])),
            add(mul(A[0], B[1]), mul(A[1], B[3])),
            add(mul(A[2], B[0]), mul(A[3], B[2])),
            add(mul(A[2], B[1]), mul(A[3], B[3])),
        )

    def canon(A):
        lead = next(x for x in A if x != (0, 0))
        s = inv[lead]
        return tuple(mul(s, x) for x in A)

    gens = []
    for x3 in range(3):
        for x4 in range(3):
            if (x3 * x3 + x4 * x4) % 3 == 2:  # x3^2 - nu x4^2 = -1
                c3, c4 = (x3, 0), (x4, 0)
                gens.append(canon(((1, 0), add(c3, neg(mul(c4, i))), mul(tm1, add(c3, mul(c4, i))), (1, 0))))
    ident = canon(((1, 0), (0, 0), (0, 0), (1, 0)))
    dist = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for v in frontier:
            for s in gens:
                w = canon(mmul(v, s))
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return len(gens), len(dist), max(dist.values())
