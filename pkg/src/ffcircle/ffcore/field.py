"""Finite fields F_q of odd characteristic with table-driven arithmetic.

Elements are plain ints ``0 <= e < q``.  For ``q = p**n`` with ``n > 1`` the
element ``e`` encodes the vector of F_p coordinates ``(c_0, ..., c_{n-1})``
with ``e = sum(c_i * p**i)`` in the basis ``1, u, ..., u**(n-1)`` of
``F_p[u]/(h(u))``; ``h`` is the lexicographically first monic irreducible of
degree ``n`` (for q = 9 this is ``u**2 + 1``).
"""

from __future__ import annotations

from functools import lru_cache


class FieldError(ValueError):
    pass


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n, m = 0, q
    while m % p == 0:
        m //= p
        n += 1
    if m != 1:
        raise FieldError(f"q={q} is not a prime power")
    return p, n


def _prime_poly_mulmod(a: list[int], b: list[int], h: list[int], p: int) -> list[int]:
    n = len(h) - 1
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # h is monic
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n + 1):
                prod[k - n + j] = (prod[k - n + j] - c * h[j]) % p
    return prod[:n]


def _has_root_free_factor(h: list[int], p: int) -> bool:
    """True iff the monic ``h`` over F_p is irreducible (brute-force, tiny n)."""
    n = len(h) - 1
    # a reducible h has a monic factor of degree d <= n // 2
    for d in range(1, n // 2 + 1):
        for code in range(p**d):
            f = [(code // p**i) % p for i in range(d)] + [1]
            # polynomial remainder of h by f
            rem = list(h)
            for k in range(len(rem) - 1, d - 1, -1):
                c = rem[k]
                if c:
                    for j in range(d + 1):
                        rem[k - d + j] = (rem[k - d + j] - c * f[j]) % p
            if not any(rem[:d]):
                return False
    return True


def _first_irreducible(p: int, n: int) -> list[int]:
    # lexicographic on ascending coefficient vectors, c_0 most significant
    for code in range(p**n):
        digits = [(code // p ** (n - 1 - i)) % p for i in range(n)]
        h = digits + [1]
        if _has_root_free_factor(h, p):
            return h
    raise FieldError(f"no irreducible of degree {n} over F_{p}")  # pragma: no cover


class GF:
    """The finite field with ``q`` elements.

    Use :func:`GF.get` (cached) rather than the constructor so that equal
    fields are the identical object.
    """

    def __init__(self, q: int):
        p, n = _prime_power(q)
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        self.q, self.p, self.n = q, p, n
        if n == 1:
            self.modulus = (0, 1)
            self._build_prime()
        else:
            self.modulus = tuple(_first_irreducible(p, n))
            self._build_extension()
        self.neg_table = [self.sub_table[0][a] for a in range(q)]
        self.inv_table = [0] * q
        for a in range(1, q):
            row = self.mul_table[a]
            self.inv_table[a] = row.index(1)
        half = (q - 1) // 2
        self.chi_table = [0] + [1 if self.pow(a, half) == 1 else -1 for a in range(1, q)]
        self.trace_table = [self._trace(a) for a in range(q)]

    @staticmethod
    @lru_cache(maxsize=None)
    def get(q: int) -> "GF":
        return GF(q)

    def _build_prime(self) -> None:
        p = self.p
        self.add_table = [[(a + b) % p for b in range(p)] for a in range(p)]
        self.sub_table = [[(a - b) % p for b in range(p)] for a in range(p)]
        self.mul_table = [[(a * b) % p for b in range(p)] for a in range(p)]

    def _vec(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.n)]

    def _enc(self, v: list[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(v))

    def _build_extension(self) -> None:
        q, p = self.q, self.p
        vecs = [self._vec(a) for a in range(q)]
        h = list(self.modulus)
        self.add_table = [
            [self._enc([(x + y) % p for x, y in zip(vecs[a], vecs[b])]) for b in range(q)]
            for a in range(q)
        ]
        self.sub_table = [
            [self._enc([(x - y) % p for x, y in zip(vecs[a], vecs[b])]) for b in range(q)]
            for a in range(q)
        ]
        self.mul_table = [
            [self._enc(_prime_poly_mulmod(vecs[a], vecs[b], h, p)) for b in range(q)]
            for a in range(q)
        ]

    def _trace(self, a: int) -> int:
        # absolute trace a + a^p + ... + a^(p^(n-1)), lands in F_p
        acc, x = 0, a
        for _ in range(self.n):
            acc = self.add_table[acc][x]
            x = self.pow(x, self.p)
        if acc >= self.p:
            raise FieldError("trace left the prime field")  # pragma: no cover
        return acc

    # scalar operations -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.sub_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        acc = 1
        while e:
            if e & 1:
                acc = self.mul_table[acc][a]
            a = self.mul_table[a][a]
            e >>= 1
        return acc

    def trace(self, a: int) -> int:
        return self.trace_table[a]

    def chi(self, a: int) -> int:
        """Quadratic character: 1 on nonzero squares, -1 on non-squares, 0 at 0."""
        return self.chi_table[a]

    def is_square(self, a: int) -> bool:
        return self.chi_table[a] >= 0

    def sqrt(self, a: int) -> int:
        """Smallest-encoded square root; raises if ``a`` is a non-square."""
        for x in range(self.q):
            if self.mul_table[x][x] == a:
                return x
        raise FieldError(f"{a} is not a square in F_{self.q}")

    def from_int(self, k: int) -> int:
        """Image of the integer ``k`` under Z -> F_p -> F_q."""
        return k % self.p

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def first_nonsquare(self) -> int:
        return next(a for a in range(1, self.q) if self.chi_table[a] < 0)

    def format(self, a: int) -> str:
        if self.n == 1:
            return str(a)
        terms = []
        for i, c in enumerate(self._vec(a)):
            if c:
                mono = "" if i == 0 else ("u" if i == 1 else f"u^{i}")
                terms.append(mono if c == 1 and mono else f"{c}{mono}")
        return "+".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (GF.get, (self.q,))

    # vectorized operations on numpy arrays of element codes --------------

    def _np_tables(self):
        import numpy as np

        if not hasattr(self, "_np"):
            self._np = (
                np.array(self.add_table, dtype=np.int64),
                np.array(self.mul_table, dtype=np.int64),
                np.array(self.neg_table, dtype=np.int64),
                np.array(self.sub_table, dtype=np.int64),
                np.array(self.trace_table, dtype=np.int64),
                np.array(self.inv_table, dtype=np.int64),
            )
        return self._np

    def vadd(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        return self._np_tables()[0][a, b]

    def vmul(self, a, b):
        if self.n == 1:
            return (a * b) % self.p
        return self._np_tables()[1][a, b]

    def vneg(self, a):
        if self.n == 1:
            return (-a) % self.p
        return self._np_tables()[2][a]

    def vsub(self, a, b):
        if self.n == 1:
            return (a - b) % self.p
        return self._np_tables()[3][a, b]

    def vtrace(self, a):
        if self.n == 1:
            return a
        return self._np_tables()[4][a]

    def vinv(self, a):
        return self._np_tables()[5][a]
