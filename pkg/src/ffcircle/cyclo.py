"""Exact arithmetic in the cyclotomic field Q(zeta_p).

An element is ``(1/den) * sum_k num[k] zeta^k`` with ``zeta = exp(2 pi i / p)``.
The representation is made unique by the relation ``1 + zeta + ... +
zeta^(p-1) = 0`` (we force ``num[p-1] = 0``) and by reducing the fraction.
Equality, and in particular "is exactly zero", is therefore decidable.

Every character sum in this package lands in Q(zeta_p): Gauss sums over F_q
are in Z[zeta_p], and the stationary-phase factors only ever appear as
``q^(-(ord+1)/2) * G`` (see :func:`ffcircle.characters.gauss_factor`).
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable

import numpy as np


@lru_cache(maxsize=None)
def _roots(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


class Cyclo:
    __slots__ = ("p", "num", "den")

    def __init__(self, p: int, num: Iterable[int], den: int = 1):
        num = [int(x) for x in num]
        if len(num) != p:
            raise ValueError(f"expected {p} coefficients, got {len(num)}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        last = num[-1]
        if last:
            num = [x - last for x in num]
        if den < 0:
            num, den = [-x for x in num], -den
        g = den
        for x in num:
            g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            num = [x // g for x in num]
            den //= g
        self.p = p
        self.num = tuple(num)
        self.den = den

    # constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "Cyclo":
        return cls(p, [0] * p)

    @classmethod
    def one(cls, p: int) -> "Cyclo":
        return cls.rational(p, 1)

    @classmethod
    def rational(cls, p: int, x: Fraction | int) -> "Cyclo":
        x = Fraction(x)
        return cls(p, [x.numerator] + [0] * (p - 1), x.denominator)

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "Cyclo":
        num = [0] * p
        num[k % p] = 1
        return cls(p, num)

    @classmethod
    def from_counts(cls, p: int, counts, scale: Fraction | int = 1) -> "Cyclo":
        """sum_k counts[k] zeta^k, times a rational scale."""
        scale = Fraction(scale)
        c = [int(x) * scale.numerator for x in np.asarray(counts).reshape(-1)[:p]]
        c += [0] * (p - len(c))
        return cls(p, c, scale.denominator)

    @classmethod
    def from_exponents(cls, p: int, exps, weight: Fraction | int = 1) -> "Cyclo":
        """sum over an array of exponents e of zeta^e."""
        counts = np.bincount(np.asarray(exps, dtype=np.int64).reshape(-1) % p, minlength=p)
        return cls.from_counts(p, counts, weight)

    # arithmetic --------------------------------------------------------

    def _lift(self, other) -> "Cyclo":
        if isinstance(other, Cyclo):
            if other.p != self.p:
                raise ValueError("cyclotomic fields differ")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclo.rational(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d = self.den * other.den // gcd(self.den, other.den)
        a, b = d // self.den, d // other.den
        return Cyclo(self.p, [x * a + y * b for x, y in zip(self.num, other.num)], d)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.p, [-x for x in self.num], self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = [0] * p
        for i, x in enumerate(self.num):
            if x:
                for j, y in enumerate(other.num):
                    if y:
                        out[(i + j) % p] += x * y
        return Cyclo(p, out, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Cyclo(self.p, [x * other.denominator for x in self.num], self.den * other.numerator)
        return NotImplemented

    def __pow__(self, e: int) -> "Cyclo":
        if e < 0:
            raise ValueError("negative powers are not supported")
        acc, base = Cyclo.one(self.p), self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def conj(self) -> "Cyclo":
        p = self.p
        out = [0] * p
        for k, x in enumerate(self.num):
            out[(-k) % p] += x
        return Cyclo(p, out, self.den)

    def galois(self, a: int) -> "Cyclo":
        """The automorphism zeta -> zeta^a (a prime to p)."""
        p = self.p
        out = [0] * p
        for k, x in enumerate(self.num):
            out[(a * k) % p] += x
        return Cyclo(p, out, self.den)

    def abs2(self) -> "Cyclo":
        return self * self.conj()

    # predicates and conversions ---------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def __complex__(self) -> complex:
        return complex(np.dot(np.array(self.num, dtype=float), _roots(self.p)) / self.den)

    def __abs__(self) -> float:
        return abs(complex(self))

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.p, self.num, self.den))

    def __repr__(self) -> str:
        z = complex(self)
        return f"Cyclo(p={self.p}, num={list(self.num)}, den={self.den}) ~ {z.real:.6g}{z.imag:+.6g}j"

    def to_json(self) -> dict:
        return {"p": self.p, "num": list(self.num), "den": self.den}

    @classmethod
    def from_json(cls, d: dict) -> "Cyclo":
        return cls(d["p"], d["num"], d["den"])


def cyclo_sum(p: int, items: Iterable[Cyclo]) -> Cyclo:
    acc = Cyclo.zero(p)
    for x in items:
        acc = acc + x
    return acc


def close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    return cmath.isclose(a, b, rel_tol=tol, abs_tol=tol)


def cyclic_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product in Z[zeta_p] of integer arrays (..., p), as cyclic convolution."""
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
    for k in range(p):
        out += a[..., k : k + 1] * np.roll(b, k, axis=-1)
    return out
