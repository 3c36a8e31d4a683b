"""Polynomials over F_q and the number theory of F_q[t].

A :class:`Poly` stores ascending coefficients (index i is the coefficient of
t^i) as field-element ints, with no trailing zeros.  Two text formats are
supported: the human form ``"t^2+t+2"`` and the machine form ``"2,1,1"``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .field import GF, FieldError


class PolyError(ValueError):
    pass


class Poly:
    __slots__ = ("F", "c", "_hash")

    def __init__(self, F: GF | int, coeffs: Iterable[int] = ()):
        if isinstance(F, int):
            F = GF.get(F)
        c = [int(x) for x in coeffs]
        for x in c:
            if not 0 <= x < F.q:
                raise PolyError(f"coefficient {x} outside F_{F.q}")
        while c and c[-1] == 0:
            c.pop()
        self.F = F
        self.c = tuple(c)
        self._hash = None

    # constructors ------------------------------------------------------

    @classmethod
    def const(cls, F: GF | int, a: int) -> "Poly":
        F = GF.get(F) if isinstance(F, int) else F
        return cls(F, [a % F.q if F.n == 1 else a])

    @classmethod
    def from_int_coeffs(cls, F: GF | int, coeffs: Iterable[int]) -> "Poly":
        """Coefficients given as integers, reduced through Z -> F_p."""
        F = GF.get(F) if isinstance(F, int) else F
        return cls(F, [F.from_int(x) for x in coeffs])

    @classmethod
    def monomial(cls, F: GF | int, d: int, a: int = 1) -> "Poly":
        F = GF.get(F) if isinstance(F, int) else F
        return cls(F, [0] * d + [a])

    @classmethod
    def t(cls, F: GF | int) -> "Poly":
        return cls.monomial(F, 1)

    @classmethod
    def from_code(cls, F: GF | int, code: int) -> "Poly":
        """Inverse of :meth:`code`: base-q digits are the coefficients."""
        F = GF.get(F) if isinstance(F, int) else F
        c = []
        while code:
            code, d = divmod(code, F.q)
            c.append(d)
        return cls(F, c)

    @classmethod
    def parse(cls, F: GF | int, s: str) -> "Poly":
        return parse_poly(F, s)

    # basic data --------------------------------------------------------

    @property
    def q(self) -> int:
        return self.F.q

    @property
    def deg(self) -> int:
        """Degree; the zero polynomial has degree -1 here (read as -infinity)."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self) -> bool:
        return bool(self.c)

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def coeff(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def code(self) -> int:
        q = self.F.q
        acc = 0
        for x in reversed(self.c):
            acc = acc * q + x
        return acc

    def sort_key(self) -> tuple:
        """Lexicographic order on ascending coefficient vectors (c_0 first)."""
        return (self.deg, self.c)

    def norm(self) -> int:
        """|p| = q**deg p, and |0| = 0."""
        return 0 if not self.c else self.F.q ** self.deg

    # arithmetic --------------------------------------------------------

    def _same(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.F is not self.F:
                raise PolyError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return Poly(self.F, [self.F.from_int(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        add = self.F.add_table
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        return Poly(self.F, [add[x][b[i]] if i < len(b) else x for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        neg = self.F.neg_table
        return Poly(self.F, [neg[x] for x in self.c])

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        if not self.c or not other.c:
            return Poly(self.F)
        mul, add = self.F.mul_table, self.F.add_table
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                row = mul[x]
                for j, y in enumerate(other.c):
                    if y:
                        out[i + j] = add[out[i + j]][row[y]]
        return Poly(self.F, out)

    __rmul__ = __mul__

    def scale(self, a: int) -> "Poly":
        row = self.F.mul_table[a]
        return Poly(self.F, [row[x] for x in self.c])

    def shift(self, k: int) -> "Poly":
        """Multiply by t**k (k >= 0)."""
        if not self.c:
            return self
        return Poly(self.F, [0] * k + list(self.c))

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise PolyError("negative power of a polynomial")
        acc, base = Poly(self.F, [1]), self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __divmod__(self, other):
        other = self._same(other)
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        mul, sub = F.mul_table, F.sub_table
        rem = list(self.c)
        db = other.deg
        inv_lc = F.inv(other.lc)
        if len(rem) <= db:
            return Poly(F), self
        quo = [0] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            x = rem[k]
            if x:
                f = mul[x][inv_lc]
                quo[k - db] = f
                row = mul[f]
                for j, y in enumerate(other.c):
                    if y:
                        rem[k - db + j] = sub[rem[k - db + j]][row[y]]
        return Poly(F, quo), Poly(F, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        qt, rm = divmod(self, other)
        if rm:
            raise PolyError(f"{other} does not divide {self}")
        return qt

    def divides(self, other: "Poly") -> bool:
        """True iff self | other (0 divides only 0)."""
        if not self.c:
            return not other.c
        return not (other % self).c

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return self.scale(self.F.inv(self.lc))

    def derivative(self) -> "Poly":
        F = self.F
        out = []
        for i, x in enumerate(self.c[1:], start=1):
            out.append(F.mul(F.from_int(i), x))
        return Poly(F, out)

    def __call__(self, x: int) -> int:
        """Evaluate at a field element (Horner)."""
        acc = 0
        mul, add = self.F.mul_table, self.F.add_table
        for a in reversed(self.c):
            acc = add[mul[acc][x]][a]
        return acc

    def pow_mod(self, e: int, m: "Poly") -> "Poly":
        acc, base = Poly(self.F, [1]) % m, self % m
        while e:
            if e & 1:
                acc = (acc * base) % m
            base = (base * base) % m
            e >>= 1
        return acc

    # comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Poly(self.F, [self.F.from_int(other)])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.F is other.F and self.c == other.c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.F.q, self.c))
        return self._hash

    def __lt__(self, other: "Poly") -> bool:
        return self.sort_key() < other.sort_key()

    # text --------------------------------------------------------------

    def machine(self) -> str:
        return ",".join(str(x) for x in self.c) if self.c else "0"

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly(q={self.F.q}, {format_poly(self)})"

    def __reduce__(self):
        return (_rebuild, (self.F.q, self.c))


def _rebuild(q, c):
    return Poly(GF.get(q), c)


# text formats ----------------------------------------------------------

def format_poly(p: Poly) -> str:
    if not p.c:
        return "0"
    F = p.F
    parts = []
    for i in range(len(p.c) - 1, -1, -1):
        a = p.c[i]
        if not a:
            continue
        cs = F.format(a)
        if F.n > 1 and "+" in cs:
            cs = f"({cs})"
        if i == 0:
            parts.append(cs)
        else:
            mono = "t" if i == 1 else f"t^{i}"
            parts.append(mono if a == 1 else f"{cs}{mono}")
    return "+".join(parts)


_TERM = re.compile(r"^(\d*|\([^()]*\)|\d*u(?:\^\d+)?)\*?(t(?:\^(\d+))?)?$")


def parse_poly(F: GF | int, s: str) -> Poly:
    """Parse ``"t^2+t+2"`` (human) or ``"2,1,1"`` (machine, ascending).

    Integer coefficients denote encoded field elements; a leading ``-``
    negates a term.  Errors name the offending column.
    """
    F = GF.get(F) if isinstance(F, int) else F
    text = s.strip()
    if not text:
        raise PolyError("empty polynomial string")
    if "," in text:
        coeffs = []
        for i, tok in enumerate(text.split(",")):
            tok = tok.strip()
            if not re.fullmatch(r"-?\d+", tok):
                raise PolyError(f"bad coefficient {tok!r} at position {i}")
            coeffs.append(_coerce(F, int(tok)))
        return Poly(F, coeffs)
    compact = text.replace(" ", "")
    out = Poly(F)
    for start, tok in _split_terms(compact, s):
        sign = -1 if tok.startswith("-") else 1
        body = tok.lstrip("+-")
        tm = _TERM.match(body)
        if not tm or (not tm.group(1) and not tm.group(2)):
            raise PolyError(f"cannot parse term {tok!r} at column {start + 1} of {s!r}")
        coef = _parse_coeff(F, tm.group(1), s, start) if tm.group(1) else 1
        if sign < 0:
            coef = F.neg(coef)
        d = (int(tm.group(3)) if tm.group(3) else 1) if tm.group(2) else 0
        out = out + Poly.monomial(F, d, coef)
    return out


def _split_terms(text: str, orig: str) -> list[tuple[int, str]]:
    """Top-level signed terms with their start columns; parentheses group field elements."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise PolyError(f"unbalanced ')' at column {i + 1} of {orig!r}")
        elif ch in "+-" and depth == 0 and i > start:
            out.append((start, text[start:i]))
            start = i
    if depth:
        raise PolyError(f"unbalanced '(' in {orig!r}")
    out.append((start, text[start:]))
    return out


def _parse_coeff(F: GF, tok: str, orig: str, col: int) -> int:
    """An integer code, or for q = p^n an expression in u such as 2u, u^2 or (1+2u)."""
    if tok.isdigit():
        return _coerce(F, int(tok))
    body = tok[1:-1] if tok.startswith("(") and tok.endswith(")") else tok
    if F.n == 1 or not body:
        raise PolyError(f"bad coefficient {tok!r} at column {col + 1} of {orig!r}")
    acc = 0
    for piece in re.finditer(r"[+-]?[^+-]+", body):
        m = re.fullmatch(r"([+-]?)(\d*)(u(?:\^(\d+))?)?", piece.group(0))
        if not m or (not m.group(2) and not m.group(3)):
            raise PolyError(f"bad coefficient {tok!r} at column {col + 1} of {orig!r}")
        c = int(m.group(2)) % F.p if m.group(2) else 1
        e = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
        if e >= F.n:
            raise PolyError(f"u^{e} exceeds the field degree in {orig!r}")
        val = c * F.p**e  # element codes are base-p digit vectors in u
        acc = F.add(acc, F.neg(val) if m.group(1) == "-" else val)
    return acc


def _coerce(F: GF, k: int) -> int:
    if F.n == 1:
        return k % F.p
    if k < 0:
        return F.neg(_coerce(F, -k))
    if k >= F.q:
        raise PolyError(f"coefficient {k} is not an element code of F_{F.q}")
    return k


# number theory ---------------------------------------------------------

def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(d, u, v) with u*a + v*b = d, d monic gcd (or 0 if a = b = 0)."""
    F = a.F
    r0, r1 = a, b
    s0, s1 = Poly(F, [1]), Poly(F)
    t0, t1 = Poly(F), Poly(F, [1])
    while r1:
        qt, rm = divmod(r0, r1)
        r0, r1 = r1, rm
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if not r0:
        return r0, s0, t0
    inv = F.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def gcd_monic(a: Poly, b: Poly) -> Poly:
    if not a and not b:
        raise PolyError("gcd(0, 0) is undefined")
    return xgcd(a, b)[0]


def gcd_many(*ps: Poly) -> Poly:
    nz = [p for p in ps if p]
    if not nz:
        raise PolyError("gcd of zeros is undefined")
    g = nz[0].monic()
    for p in nz[1:]:
        g = gcd_monic(g, p)
    return g


def inv_mod(x: Poly, r: Poly) -> Poly:
    if r.deg < 0:
        raise PolyError("modulus must be nonzero")
    if r.deg == 0:
        return Poly(r.F)
    d, u, _ = xgcd(x % r, r)
    if d.deg != 0:
        raise PolyError(f"{x} is not a unit modulo {r}")
    return u % r


def crt(residues: Sequence[Poly], moduli: Sequence[Poly]) -> Poly:
    """Unique x mod prod(moduli) with x = residues[i] mod moduli[i]."""
    F = moduli[0].F
    x, M = Poly(F), Poly(F, [1])
    for a, m in zip(residues, moduli):
        # x + M*k = a mod m
        k = ((a - x) * inv_mod(M, m)) % m
        x = x + M * k
        M = M * m
    return x % M


def m_part(g: Poly, r: Poly) -> Poly:
    """(g, r^infinity): the largest monic divisor of g supported on primes of r."""
    if not g or not r:
        raise PolyError("m_part needs nonzero arguments")
    m = Poly(g.F, [1])
    rest = g.monic()
    d = gcd_monic(rest, r)
    while d.deg > 0:
        m = m * d
        rest = rest.exact_div(d)
        d = gcd_monic(rest, d)
    return m


def valuation(a: Poly, p: Poly) -> int:
    if not a:
        raise PolyError("valuation of zero")
    v = 0
    while True:
        qt, rm = divmod(a, p)
        if rm:
            return v
        a, v = qt, v + 1


def jacobi(a: Poly, r: Poly) -> int:
    """Jacobi symbol (a/r) for monic r, via reciprocity in F_q[t]."""
    if not r.is_monic():
        raise PolyError("Jacobi symbol needs a monic modulus")
    F = r.F
    half = (F.q - 1) // 2
    sign = 1
    a = a % r
    while True:
        if r.deg == 0:
            return sign
        if not a:
            return 0
        lc = a.lc
        if lc != 1:
            # (c/r) = chi(c)^deg r for constants c
            if r.deg % 2 and F.chi(lc) < 0:
                sign = -sign
            a = a.monic()
        if a.deg == 0:
            return sign
        if half % 2 and a.deg % 2 and r.deg % 2:
            sign = -sign
        a, r = r % a, a


def is_irreducible(g: Poly) -> bool:
    """Rabin-style test: t^(q^n) = t mod g, and gcd(t^(q^(n/p)) - t, g) = 1."""
    n = g.deg
    if n <= 0:
        return False
    if n == 1:
        return True
    F = g.F
    q = F.q
    gm = g.monic()
    t = Poly.t(F)

    def frob(k: int) -> Poly:
        x = t % gm
        for _ in range(k):
            x = x.pow_mod(q, gm)
        return x

    if frob(n) != t % gm:
        return False
    for p in _prime_divisors(n):
        h = (frob(n // p) - t) % gm
        if gcd_monic(h, gm).deg != 0:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
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


def iter_polys(F: GF | int, max_deg: int) -> Iterator[Poly]:
    """All polynomials of degree <= max_deg (zero first), ordered by code."""
    F = GF.get(F) if isinstance(F, int) else F
    for code in range(F.q ** (max_deg + 1)):
        yield Poly.from_code(F, code)


def iter_monic(F: GF | int, d: int) -> Iterator[Poly]:
    """Monic polynomials of degree d, lexicographic with c_0 most significant."""
    F = GF.get(F) if isinstance(F, int) else F
    for digits in product(range(F.q), repeat=d):
        yield Poly(F, list(digits) + [1])


def iter_monic_upto(F: GF | int, d: int) -> Iterator[Poly]:
    for k in range(d + 1):
        yield from iter_monic(F, k)


def iter_irreducible(F: GF | int, d: int) -> Iterator[Poly]:
    for p in iter_monic(F, d):
        if is_irreducible(p):
            yield p


@lru_cache(maxsize=None)
def _irreducibles_upto(q: int, d: int) -> tuple[Poly, ...]:
    return tuple(p for k in range(1, d + 1) for p in iter_irreducible(q, k))


def factor(a: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factorization by trial division (small degrees)."""
    if not a:
        raise PolyError("factor of zero")
    F = a.F
    rest = a.monic()
    out = []
    k = 1
    while rest.deg >= 2 * k:
        for p in iter_irreducible(F, k):
            e = 0
            while True:
                qt, rm = divmod(rest, p)
                if rm:
                    break
                rest, e = qt, e + 1
            if e:
                out.append((p, e))
        k += 1
    if rest.deg > 0:
        out.append((rest, 1))
    out.sort(key=lambda pe: pe[0].sort_key())
    return out


def omega(a: Poly) -> int:
    return len(factor(a))


def is_squarefree(a: Poly) -> bool:
    return all(e == 1 for _, e in factor(a))


__all__ = [
    "Poly",
    "PolyError",
    "FieldError",
    "parse_poly",
    "format_poly",
    "xgcd",
    "gcd_monic",
    "gcd_many",
    "inv_mod",
    "crt",
    "m_part",
    "valuation",
    "jacobi",
    "is_irreducible",
    "iter_polys",
    "iter_monic",
    "iter_monic_upto",
    "iter_irreducible",
    "factor",
    "omega",
    "is_squarefree",
]
