"""Truncated Laurent series in 1/t over F_q, i.e. elements of F_q((1/t)).

A :class:`Laurent` knows its coefficients exactly for every degree >= ``prec``
and nothing below.  ``prec = None`` marks an exact element (finitely many
terms, all known).  Operations propagate precision and raise
:class:`PrecisionError` rather than reading unknown digits.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .field import GF
from .poly import Poly

DEFAULT_PREC = -64


class PrecisionError(ArithmeticError):
    pass


def _max_prec(*ps):
    vals = [p for p in ps if p is not None]
    return max(vals) if vals else None


class Laurent:
    __slots__ = ("F", "terms", "prec")

    def __init__(self, F: GF | int, terms: Mapping[int, int] | None = None, prec: int | None = None):
        if isinstance(F, int):
            F = GF.get(F)
        self.F = F
        self.prec = prec
        self.terms = {
            d: a for d, a in (terms or {}).items() if a and (prec is None or d >= prec)
        }

    # constructors ------------------------------------------------------

    @classmethod
    def zero(cls, F, prec=None) -> "Laurent":
        return cls(F, {}, prec)

    @classmethod
    def monomial(cls, F, d: int, a: int = 1) -> "Laurent":
        return cls(F, {d: a})

    @classmethod
    def from_poly(cls, p: Poly) -> "Laurent":
        return cls(p.F, {i: a for i, a in enumerate(p.c)})

    @classmethod
    def from_digits(cls, F, top: int, digits: Iterable[int], prec: int | None = None) -> "Laurent":
        """Coefficients listed from degree ``top`` downward."""
        terms = {top - i: a for i, a in enumerate(digits)}
        return cls(F, terms, prec)

    @classmethod
    def from_rational(cls, num: Poly, den: Poly, prec: int = DEFAULT_PREC) -> "Laurent":
        """Expand num/den by long division down to degree ``prec``."""
        if not den:
            raise ZeroDivisionError("rational with zero denominator")
        F = num.F
        if not num:
            return cls(F, {}, None)
        qt, rm = divmod(num, den)
        terms = {i: a for i, a in enumerate(qt.c)}
        if not rm:
            return cls(F, terms, None)
        # remaining proper fraction rm/den: digits at degrees -1, -2, ...
        inv_lc = F.inv(den.lc)
        db = den.deg
        cur = list(rm.c) + [0] * (db + 1 - len(rm.c))
        d = -1
        exact = False
        while d >= prec:
            # shift numerator by t, take the quotient digit
            cur = [0] + cur[:db]
            lead = cur[db] if db < len(cur) else 0
            # cur has length db + 1 representing a polynomial of degree <= db
            a = F.mul(lead, inv_lc)
            if a:
                terms[d] = a
                for j, y in enumerate(den.c):
                    cur[j] = F.sub(cur[j], F.mul(a, y))
            if not any(cur):
                exact = True
                break
            d -= 1
        return cls(F, terms, None if exact else prec)

    # data --------------------------------------------------------------

    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """True if all known coefficients vanish (and the element is exact)."""
        return not self.terms and self.prec is None

    def known_zero(self) -> bool:
        return not self.terms

    @property
    def deg(self) -> int:
        """Top degree (ord); raises if no nonzero coefficient is known."""
        if not self.terms:
            raise PrecisionError("top coefficient unknown (value is zero to known precision)")
        return max(self.terms)

    @property
    def top(self) -> int:
        return self.terms[self.deg]

    def coeff(self, d: int) -> int:
        if self.prec is not None and d < self.prec:
            raise PrecisionError(f"coefficient of t^{d} below precision {self.prec}")
        return self.terms.get(d, 0)

    def norm_exp(self) -> float:
        """log_q |self|; -inf for an exact zero."""
        if not self.terms:
            if self.prec is None:
                return float("-inf")
            raise PrecisionError("norm of an element indistinguishable from zero")
        return self.deg

    def norm(self) -> float:
        e = self.norm_exp()
        return 0.0 if e == float("-inf") else float(self.F.q) ** e

    def lowest(self) -> int:
        return min(self.terms) if self.terms else 0

    # arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            return other
        if isinstance(other, Poly):
            return Laurent.from_poly(other)
        if isinstance(other, int):
            return Laurent(self.F, {0: self.F.from_int(other)})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.F
        out = dict(self.terms)
        for d, a in other.terms.items():
            out[d] = F.add(out.get(d, 0), a)
        return Laurent(F, out, _max_prec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.F, {d: self.F.neg(a) for d, a in self.terms.items()}, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return other + (-self)

    def _top_or_none(self):
        return max(self.terms) if self.terms else None

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.F
        ha, hb = self._top_or_none(), other._top_or_none()
        # an element that is zero to known precision still bounds the product
        if ha is None and self.prec is not None:
            ha = self.prec - 1
        if hb is None and other.prec is not None:
            hb = other.prec - 1
        cands = []
        if self.prec is not None and hb is not None:
            cands.append(self.prec + hb)
        if other.prec is not None and ha is not None:
            cands.append(other.prec + ha)
        prec = max(cands) if cands else None
        out: dict[int, int] = {}
        for i, x in self.terms.items():
            row = F.mul_table[x]
            for j, y in other.terms.items():
                d = i + j
                if prec is not None and d < prec:
                    continue
                out[d] = F.add(out.get(d, 0), row[y])
        return Laurent(F, out, prec)

    __rmul__ = __mul__

    def scale(self, a: int) -> "Laurent":
        return Laurent(self.F, {d: self.F.mul(a, x) for d, x in self.terms.items()}, self.prec)

    def shift(self, k: int) -> "Laurent":
        """Multiply by t**k."""
        return Laurent(
            self.F,
            {d + k: a for d, a in self.terms.items()},
            None if self.prec is None else self.prec + k,
        )

    def inverse(self, prec: int = DEFAULT_PREC) -> "Laurent":
        """1/self; an exact input is expanded down to ``prec``."""
        if not self.terms:
            raise ZeroDivisionError("inverse of zero (or of an element with unknown top)")
        F = self.F
        h = self.deg
        lead_inv = F.inv(self.top)
        # self = a t^h (1 + x), x in the unit ball; relative precision
        rel = None if self.prec is None else self.prec - h
        out_prec = -h + (rel if rel is not None else prec + h)
        if rel is None and self.lowest() == h:
            return Laurent(F, {-h: lead_inv})
        n = -h - out_prec  # number of digits below -h
        u = [F.mul(self.terms.get(h - i, 0), lead_inv) for i in range(n + 1)]
        v = [0] * (n + 1)
        v[0] = 1
        for k in range(1, n + 1):
            acc = 0
            for i in range(1, k + 1):
                if u[i]:
                    acc = F.add(acc, F.mul(u[i], v[k - i]))
            v[k] = F.neg(acc)
        terms = {-h - k: F.mul(v[k], lead_inv) for k in range(n + 1)}
        return Laurent(F, terms, out_prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_exact() and len(other.terms) == 1:
            (d, a), = other.terms.items()
            return self.shift(-d).scale(self.F.inv(a))
        target = DEFAULT_PREC
        if self.prec is not None:
            target = min(target, self.prec - 2 * other.deg)
        return self * other.inverse(target)

    def truncate(self, prec: int) -> "Laurent":
        """Forget digits below ``prec``."""
        p = prec if self.prec is None else max(prec, self.prec)
        return Laurent(self.F, {d: a for d, a in self.terms.items() if d >= p}, p)

    def int_part(self) -> Poly:
        if self.prec is not None and self.prec > 0:
            raise PrecisionError("integral part needs all nonnegative-degree digits")
        top = max([d for d in self.terms if d >= 0], default=-1)
        return Poly(self.F, [self.terms.get(i, 0) for i in range(top + 1)])

    def frac_part(self) -> "Laurent":
        """((self)): the part with strictly negative degrees."""
        return Laurent(self.F, {d: a for d, a in self.terms.items() if d < 0}, self.prec)

    def digits(self, top: int, bottom: int) -> list[int]:
        """Coefficients from degree ``top`` down to ``bottom`` inclusive."""
        return [self.coeff(d) for d in range(top, bottom - 1, -1)]

    def sqrt_unit(self, prec: int = DEFAULT_PREC) -> "Laurent":
        """Square root of 1 + x with x in the unit ball, constant term 1.

        Digits are solved one at a time from (1 + s)^2 = 1 + x; an exact
        input is expanded down to ``prec``.
        """
        F = self.F
        if self.terms.get(0, 0) != 1 or any(d > 0 for d in self.terms):
            raise ValueError("sqrt_unit needs an element of the form 1 + x, |x| < 1")
        if self.prec is None:
            if self.lowest() == 0:
                return Laurent(F, {0: 1})
            return self.truncate(prec).sqrt_unit()
        n = -self.prec + 1
        a = [self.terms.get(-i, 0) for i in range(n)]
        s = [0] * n
        s[0] = 1
        two_inv = F.inv(F.from_int(2))
        for k in range(1, n):
            # coefficient k of s^2 is 2 s_k + sum_{0<i<k} s_i s_{k-i}
            acc = 0
            for i in range(1, k):
                acc = F.add(acc, F.mul(s[i], s[k - i]))
            s[k] = F.mul(F.sub(a[k], acc), two_inv)
        return Laurent(F, {-i: s[i] for i in range(n)}, self.prec)

    def with_prec(self, prec: int) -> "Laurent":
        """Treat an exact element as known only down to ``prec``."""
        return self.truncate(prec)

    # comparisons -------------------------------------------------------

    def agrees(self, other: "Laurent", down_to: int) -> bool:
        tops = [x for x in (self._top_or_none(), other._top_or_none()) if x is not None]
        hi = max(tops + [down_to])
        return all(self.coeff(d) == other.coeff(d) for d in range(hi, down_to - 1, -1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.F is other.F and self.terms == other.terms and self.prec == other.prec

    def __hash__(self):
        return hash((self.F.q, tuple(sorted(self.terms.items())), self.prec))

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            parts = []
            for d in sorted(self.terms, reverse=True):
                a = self.F.format(self.terms[d])
                mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
                parts.append(a if not mono else (mono if a == "1" else f"{a}{mono}"))
            body = "+".join(parts)
        tail = "" if self.prec is None else f" + O(t^{self.prec - 1})"
        return f"Laurent(q={self.F.q}, {body}{tail})"
