"""Additive characters, Gauss sums and the Farey dissection of the unit ball.

``e_q(a) = exp(2 pi i tr(a) / p)`` on F_q; ``psi`` reads the t^-1 coefficient
of a Laurent series; ``psi_r(x) = psi((x mod r) / r)``.  Each evaluator has an
exact form returning :class:`~ffcircle.cyclo.Cyclo` (suffix ``_exact`` or the
plain name when the result is a sum) and float forms for reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .cyclo import Cyclo
from .ffcore import GF, Laurent, Poly, PrecisionError, ResidueRing, gcd_monic, inv_mod, iter_monic_upto


class BudgetError(RuntimeError):
    pass


# F_q ---------------------------------------------------------------------

def e_q_exp(F: GF, a: int) -> int:
    return F.trace(a)


def e_q(F: GF | int, a: int) -> complex:
    F = GF.get(F) if isinstance(F, int) else F
    return complex(np.exp(2j * np.pi * F.trace(a) / F.p))


def e_q_exact(F: GF | int, a: int) -> Cyclo:
    F = GF.get(F) if isinstance(F, int) else F
    return Cyclo.zeta(F.p, F.trace(a))


def field_gauss_sum(F: GF | int, a: int) -> Cyclo:
    """G(a) = sum_{x in F_q} e_q(a x^2)."""
    F = GF.get(F) if isinstance(F, int) else F
    exps = [F.trace(F.mul(a, F.mul(x, x))) for x in range(F.q)]
    return Cyclo.from_exponents(F.p, exps)


def field_kloosterman(F: GF | int, a: int) -> Cyclo:
    """Kl(a, F_q) = sum_{x in F_q^*} e_q(a/x + x)."""
    F = GF.get(F) if isinstance(F, int) else F
    exps = [F.trace(F.add(F.div(a, x), x)) for x in range(1, F.q)]
    return Cyclo.from_exponents(F.p, exps)


# K_infinity ---------------------------------------------------------------

def psi_exp(alpha: Laurent) -> int:
    if alpha.prec is not None and alpha.prec > -1:
        raise PrecisionError("psi needs the t^-1 coefficient")
    return alpha.F.trace(alpha.coeff(-1))


def psi(alpha: Laurent) -> complex:
    return complex(np.exp(2j * np.pi * psi_exp(alpha) / alpha.F.p))


def psi_exact(alpha: Laurent) -> Cyclo:
    return Cyclo.zeta(alpha.F.p, psi_exp(alpha))


def reduce_mod(x, r: Poly) -> Poly:
    """Reduce an element of O_r mod r.

    ``x`` is a Poly or a pair ``(num, den)`` with ``den`` prime to ``r``.
    """
    if isinstance(x, Poly):
        return x % r if r.deg > 0 else Poly(r.F)
    num, den = x
    if r.deg <= 0:
        return Poly(r.F)
    if gcd_monic(den, r).deg != 0:
        raise ValueError(f"denominator {den} is not prime to {r}")
    return (num * inv_mod(den, r)) % r


def psi_r_exp(x, r: Poly) -> int:
    if not r:
        raise ValueError("psi_r needs r != 0")
    if r.deg == 0:
        return 0
    R = ResidueRing.get(r)
    z = reduce_mod(x, R.M)
    # psi((x mod r)/r) with r possibly non-monic: x/r = (x/lc)/(r/lc)
    if r.lc != 1:
        z = z.scale(r.F.inv(r.lc))
    return int(R.psi_exp[R.elem(z)])


def psi_r(x, r: Poly) -> complex:
    return complex(np.exp(2j * np.pi * psi_r_exp(x, r) / r.F.p))


def psi_r_exact(x, r: Poly) -> Cyclo:
    return Cyclo.zeta(r.F.p, psi_r_exp(x, r))


def gauss_tau(r: Poly) -> Cyclo:
    """tau_r = sum_{x mod r} psi_r(x^2) for monic r (1 when r = 1)."""
    if not r.is_monic():
        raise ValueError("gauss_tau needs a monic modulus")
    if r.deg == 0:
        return Cyclo.one(r.F.p)
    R = ResidueRing.get(r)
    return Cyclo.from_exponents(r.F.p, R.psi_exp[R.squares_table()])


def gauss_factor(h: Laurent) -> Cyclo:
    """The stationary-phase factor of a nonzero h in K_infinity.

    ord(h) even: min(|h|^-1/2, 1).  ord(h) >= 1 odd: |h|^-1/2 * G/|G|, which
    equals q^(-(ord+1)/2) * G since |G| = q^(1/2).  Otherwise 1.
    """
    if not h.terms:
        raise ValueError("gauss_factor needs h != 0 with known top coefficient")
    F = h.F
    o = h.deg
    if o % 2 == 0:
        return Cyclo.rational(F.p, Fraction(1, F.q ** (o // 2)) if o >= 0 else 1)
    if o >= 1:
        G = field_gauss_sum(F, h.top)
        return G * Fraction(1, F.q ** ((o + 1) // 2))
    return Cyclo.one(F.p)


# local constancy helpers --------------------------------------------------

def digit_cells(F: GF, top: int, bottom: int, budget: int = 10**7) -> np.ndarray:
    """All digit vectors for degrees top..bottom (rows), as element codes."""
    n = top - bottom + 1
    if n <= 0:
        return np.zeros((1, 0), dtype=np.int64)
    count = F.q**n
    if count > budget:
        raise BudgetError(f"{count} cells exceed the budget {budget}")
    idx = np.arange(count, dtype=np.int64)
    out = np.empty((count, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[:, i] = idx % F.q
        idx //= F.q
    return out


def kubota_sum(gamma: Laurent, N: int) -> Cyclo:
    """sum_{b in O, |b| < q^N} psi(gamma b), by direct summation."""
    if N < 0:
        raise ValueError("N must be >= 0")
    F = gamma.F
    # psi(gamma b) = e_q(sum_i b_i gamma_{-1-i})
    g = [gamma.coeff(-1 - i) for i in range(N)]
    cells = digit_cells(F, N - 1, 0)
    acc = np.zeros(cells.shape[0], dtype=np.int64)
    for i in range(N):
        if g[i]:
            acc = F.vadd(acc, F.vmul(cells[:, N - 1 - i], g[i]))
    return Cyclo.from_exponents(F.p, F.vtrace(acc))


def kubota_sum_closed(gamma: Laurent, N: int) -> Cyclo:
    frac = gamma.frac_part()
    small = (not frac.terms) or frac.deg < -N
    if frac.prec is not None and not frac.terms and frac.prec > -N:
        raise PrecisionError("fractional part not known far enough")
    return Cyclo.rational(gamma.F.p, gamma.F.q**N if small else 0)


def kubota_integral(gamma: Laurent, Y: int, depth_extra: int = 0) -> Cyclo:
    """Integral of psi(alpha gamma) over |alpha| < q^Y as a finite cell sum.

    psi(alpha gamma) is constant on cosets of {|x| < q^D} with
    D = -1 - ord(gamma); cells are digit vectors of alpha at degrees Y-1..D.
    """
    F = gamma.F
    if not gamma.terms:
        if gamma.prec is not None and gamma.prec > -Y:
            raise PrecisionError("gamma not known to the needed depth")
        return Cyclo.rational(F.p, Fraction(F.q) ** Y)
    D = min(-1 - gamma.deg, Y) - depth_extra
    if D >= Y:
        return Cyclo.rational(F.p, Fraction(F.q) ** Y)
    cells = digit_cells(F, Y - 1, D)
    acc = np.zeros(cells.shape[0], dtype=np.int64)
    for col, i in enumerate(range(Y - 1, D - 1, -1)):
        gi = gamma.coeff(-1 - i)
        if gi:
            acc = F.vadd(acc, F.vmul(cells[:, col], gi))
    return Cyclo.from_exponents(F.p, F.vtrace(acc), Fraction(F.q) ** D)


def kubota_integral_closed(gamma: Laurent, Y: int) -> Cyclo:
    F = gamma.F
    small = (not gamma.terms) or gamma.deg < -Y
    return Cyclo.rational(F.p, Fraction(F.q) ** Y if small else 0)


def quadratic_integral(f: Laurent, depth_extra: int = 0) -> Cyclo:
    """Integral of psi(f u^2) over the unit ball, by cell summation.

    psi(f u^2) depends on the digits of u at degrees -1..-(deg f) (at least
    one digit), so cells of that depth give the exact value.
    """
    F = f.F
    if not f.terms:
        return Cyclo.one(F.p)
    depth = max(f.deg, 1) + depth_extra
    cells = digit_cells(F, -1, -depth)
    # u = sum_j u_j t^-j, j = 1..depth; coefficient of t^-1 in f u^2
    acc = np.zeros(cells.shape[0], dtype=np.int64)
    for j in range(1, depth + 1):
        for k in range(1, depth + 1):
            d = -1 + j + k  # f coefficient paired with t^(-j-k)
            try:
                fd = f.coeff(d)
            except PrecisionError:
                raise
            if fd:
                acc = F.vadd(acc, F.vmul(F.vmul(cells[:, j - 1], cells[:, k - 1]), fd))
    return Cyclo.from_exponents(F.p, F.vtrace(acc), Fraction(1, F.q**depth))


# dissection --------------------------------------------------------------

@dataclass(frozen=True)
class DissectionBall:
    r: Poly
    a: Poly
    Q: int

    @property
    def radius_exp(self) -> int:
        """The ball is {alpha : |alpha - a/r| < q^(-Q - deg r)}."""
        return -self.Q - self.r.deg

    def volume(self) -> Fraction:
        return Fraction(1, self.r.F.q ** (self.Q + self.r.deg))


def dissect(q: int, Q: int) -> list[DissectionBall]:
    if Q < 1:
        raise ValueError("Q must be >= 1")
    F = GF.get(q)
    out = []
    for r in iter_monic_upto(F, Q):
        R = ResidueRing.get(r)
        if r.deg == 0:
            out.append(DissectionBall(r, Poly(F), Q))
            continue
        for code in R.units:
            out.append(DissectionBall(r, R.poly(int(code)), Q))
    return out


def iter_cylinders(q: int, depth: int) -> Iterator[Poly]:
    """Numerators A (deg < depth) of the cylinders A / t^depth of the unit ball."""
    F = GF.get(q)
    for code in range(q**depth):
        yield Poly.from_code(F, code)


def dissection_membership(q: int, Q: int, depth: int | None = None) -> np.ndarray:
    """counts[i] = number of balls containing cylinder i at the given depth.

    Cylinder i is alpha = A_i / t^depth (A_i with code i) plus anything of
    norm < q^-depth; the default depth 2Q makes membership constant on cells.
    """
    depth = 2 * Q if depth is None else depth
    F = GF.get(q)
    balls = dissect(q, Q)
    N = q**depth
    codes = np.arange(N, dtype=np.int64)
    A = np.empty((N, depth), dtype=np.int64)
    rest = codes.copy()
    for i in range(depth):
        A[:, i] = rest % q
        rest //= q
    counts = np.zeros(N, dtype=np.int64)
    for ball in balls:
        r, a = ball.r, ball.a
        # r*A - a*t^depth must have degree < depth - Q
        L = depth + r.deg
        prod = np.zeros((N, L), dtype=np.int64)
        for i, ri in enumerate(r.c):
            if ri:
                prod[:, i : i + depth] = F.vadd(prod[:, i : i + depth], F.vmul(A, ri))
        for i, ai in enumerate(a.c):
            prod[:, depth + i] = F.vsub(prod[:, depth + i], ai)
        inside = ~np.any(prod[:, depth - Q :] != 0, axis=1)
        counts += inside
    return counts
