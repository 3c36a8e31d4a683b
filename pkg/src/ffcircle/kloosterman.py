"""Kloosterman sums at finite places and at infinity, and complete quadratic sums.

Finite sums are exact elements of Q(zeta_p).  The archimedean integrals
``B_inf(psi, a, alpha)`` are evaluated two ways: by summing the locally
constant integrand over cells of the sphere ``|x| = q^a``, and by the closed
forms keyed on ``a`` and ``b`` where ``|alpha| = q^(2a+b)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import (
    BudgetError,
    digit_cells,
    field_gauss_sum,
    field_kloosterman,
    gauss_factor,
    gauss_tau,
    psi_exp,
    reduce_mod,
)
from .cyclo import Cyclo
from .ffcore import GF, Laurent, Poly, PrecisionError, ResidueRing, gcd_many, gcd_monic, inv_mod, jacobi, omega

__all__ = [
    "KloostermanParams",
    "kl_finite",
    "kl_fq",
    "weil_bound",
    "weil_check",
    "b_infinity",
    "b_infinity_closed",
    "kl_infinity",
    "kl_infinity_closed",
    "quad_complete_sum",
    "quad_complete_sum_closed",
]


@dataclass(frozen=True)
class KloostermanParams:
    r: Poly
    m: object
    n: object


def _ring_code(R: ResidueRing, x) -> int:
    if R.n == 0:
        return 0
    return R.elem(reduce_mod(x, R.M))


def kl_finite(r: Poly, m, n) -> Cyclo:
    """Kl_r(m, n) = sum over units x mod r of psi_r(m x + n / x).

    ``m`` and ``n`` are Polys or pairs (num, den) with den prime to r.  A
    unit modulus gives 1.
    """
    if isinstance(r, KloostermanParams):
        r, m, n = r.r, r.m, r.n
    if not r:
        raise ValueError("Kloosterman sum modulo 0")
    p = r.F.p
    if r.deg == 0:
        return Cyclo.one(p)
    # psi_r(y) for non-monic r: y/r = (y/lc)/(r/lc), fold 1/lc into m and n
    lc_inv = r.F.inv(r.lc)
    R = ResidueRing.get(r)
    mc = R.scalar_mul(np.array(_ring_code(R, m)), lc_inv)
    nc = R.scalar_mul(np.array(_ring_code(R, n)), lc_inv)
    units = R.units
    inv = R.inv[units]
    z = R.add(R.mul(units, mc), R.mul(inv, nc))
    return Cyclo.from_exponents(p, R.psi_exp[z])


def kl_fq(F: GF | int, a: int) -> Cyclo:
    """The prime-field style sum Kl(a, F_q) = sum_{x in F_q^*} e_q(a/x + x)."""
    return field_kloosterman(F, a)


def weil_bound(r: Poly, m, n) -> float:
    """2^omega(r) |gcd(m, n, r)|^(1/2) |r|^(1/2)."""
    if r.deg <= 0:
        return 1.0
    R = ResidueRing.get(r)
    mp, np_ = reduce_mod(m, R.M), reduce_mod(n, R.M)
    d = gcd_many(mp, np_, R.M)
    q = r.F.q
    return 2.0 ** omega(R.M) * q ** (d.deg / 2) * q ** (r.deg / 2)


def weil_check(r: Poly, m, n, tol: float = 1e-9) -> bool:
    return abs(complex(kl_finite(r, m, n))) <= weil_bound(r, m, n) + tol


# the sphere integral ------------------------------------------------------

def _bexp(alpha: Laurent) -> int:
    if not alpha.terms:
        raise ValueError("B_inf needs alpha != 0 with known top coefficient")
    return alpha.deg


def _needed_bottom(a: int, b: int) -> int:
    # psi(alpha/x) needs a+b+2 leading digits of x; psi(x) needs the t^-1 digit
    bottom = min(a, -b - 1)
    if a >= -1:
        bottom = min(bottom, -1)
    return bottom


def _sphere_sum(alpha: Laurent, a: int, bottom: int, budget: int) -> Cyclo:
    """sum over cells of {|x| = q^a} at digit depth ``bottom``, times cell measure."""
    F = alpha.F
    n = a - bottom + 1  # digits u_0 .. u_{n-1} of x / t^a
    lead = np.arange(1, F.q, dtype=np.int64)
    rest = digit_cells(F, n - 2, 0, budget // max(F.q - 1, 1)) if n > 1 else np.zeros((1, 0), dtype=np.int64)
    N = lead.size * rest.shape[0]
    u = np.empty((N, n), dtype=np.int64)
    u[:, 0] = np.repeat(lead, rest.shape[0])
    if n > 1:
        u[:, 1:] = np.tile(rest, (lead.size, 1))
    # v = 1/u as a series in t^-1: v_0 = 1/u_0, v_k = -v_0 sum_{i=1}^k u_i v_{k-i}
    v = np.zeros_like(u)
    v[:, 0] = F.vinv(u[:, 0])
    for k in range(1, n):
        acc = np.zeros(N, dtype=np.int64)
        for i in range(1, k + 1):
            acc = F.vadd(acc, F.vmul(u[:, i], v[:, k - i]))
        v[:, k] = F.vneg(F.vmul(acc, v[:, 0]))
    # alpha / x = t^-a * alpha * v; its t^-1 coefficient is sum_k alpha_{a+k-1} v_k
    phase = np.zeros(N, dtype=np.int64)
    for k in range(n):
        ak = alpha.coeff(a + k - 1)
        if ak:
            phase = F.vadd(phase, F.vmul(v[:, k], ak))
    if a >= -1:
        phase = F.vadd(phase, u[:, a + 1])
    return Cyclo.from_exponents(F.p, F.vtrace(phase), Fraction(F.q) ** bottom)


def b_infinity(a: int, alpha: Laurent, depth: int | None = None, budget: int = 10**7) -> Cyclo:
    """B_inf(psi, a, alpha) = integral over |x| = q^a of psi(alpha/x + x).

    ``depth`` is the lowest digit degree of x resolved (default: the minimum
    for local constancy).  The sum is repeated one digit deeper and a
    disagreement raises :class:`PrecisionError`.
    """
    b = _bexp(alpha) - 2 * a
    bottom = _needed_bottom(a, b) if depth is None else depth
    first = _sphere_sum(alpha, a, bottom, budget)
    second = _sphere_sum(alpha, a, bottom - 1, budget)
    if first != second:
        raise PrecisionError(f"B_inf not stable at depth {bottom}")
    return first


def b_infinity_closed(a: int, alpha: Laurent) -> Cyclo:
    """The three-case table for b != 0; delegates to Kl_inf when b = 0."""
    F = alpha.F
    b = _bexp(alpha) - 2 * a
    if b == 0:
        return kl_infinity_closed(alpha)
    top = max(a + b, a)
    if top < -1:
        return Cyclo.rational(F.p, (F.q - 1) * Fraction(F.q) ** a)
    if top == -1:
        return Cyclo.rational(F.p, -Fraction(F.q) ** a)
    return Cyclo.zero(F.p)


def kl_infinity(alpha: Laurent, depth: int | None = None, budget: int = 10**7) -> Cyclo:
    """Kl_inf(psi, alpha) by direct sphere integration (0 for odd ord)."""
    F = alpha.F
    d = _bexp(alpha)
    if d % 2:
        return Cyclo.zero(F.p)
    return b_infinity(d // 2, alpha, depth, budget)


def kl_infinity_closed(alpha: Laurent, convention: str = "stationary") -> Cyclo:
    """Closed form of Kl_inf(psi, alpha).

    Write alpha = t^(2a) alpha' (1 + alpha~).  For a >= 0 and alpha' a
    square, each root x' contributes psi(2 t^a x' (1 + alpha~)^(1/2)) times a
    Gauss factor.  ``convention="stationary"`` uses G(t^a / x'), the second
    derivative at the critical point; ``convention="literal"`` uses
    G(2 x' t^a), which differs by chi(2) when a is odd.
    """
    F = alpha.F
    d = _bexp(alpha)
    if d % 2:
        return Cyclo.zero(F.p)
    a = d // 2
    if a < -1:
        return Cyclo.rational(F.p, (F.q - 1) * Fraction(F.q) ** a)
    ap = alpha.top
    if a == -1:
        return kl_fq(F, ap) * Fraction(1, F.q)
    if not F.is_square(ap):
        return Cyclo.zero(F.p)
    # (1 + alpha~) with alpha~ in the unit ball
    unit = alpha.shift(-d).scale(F.inv(ap))
    s = unit.sqrt_unit(prec=-a - 2) if not (unit.is_exact() and len(unit.terms) == 1) else Laurent(F, {0: 1})
    total = Cyclo.zero(F.p)
    roots = [x for x in range(1, F.q) if F.mul(x, x) == ap]
    two = F.from_int(2)
    for x in roots:
        phase = psi_exp(s.shift(a).scale(F.mul(two, x)))
        if convention == "stationary":
            h = Laurent(F, {a: F.inv(x)})
        elif convention == "literal":
            h = Laurent(F, {a: F.mul(two, x)})
        else:
            raise ValueError(f"unknown convention {convention!r}")
        total = total + Cyclo.zeta(F.p, phase) * gauss_factor(h)
    return total * (Fraction(F.q) ** a)


# complete quadratic sums ------------------------------------------------

def quad_complete_sum(a: Poly, b: Poly, c: Poly) -> Cyclo:
    """sum_{x mod c} psi((a x^2 + b x) / c), by direct summation."""
    if not c:
        raise ValueError("modulus must be nonzero")
    p = c.F.p
    if c.deg == 0:
        return Cyclo.one(p)
    R = ResidueRing.get(c)
    lc_inv = c.F.inv(c.lc)
    ac = R.scalar_mul(np.array(R.elem(a)), lc_inv)
    bc = R.scalar_mul(np.array(R.elem(b)), lc_inv)
    x = np.arange(R.size, dtype=np.int64)
    z = R.add(R.mul(R.squares_table(), ac), R.mul(x, bc))
    return Cyclo.from_exponents(p, R.psi_exp[z])


def quad_complete_sum_closed(a: Poly, b: Poly, c: Poly) -> Cyclo:
    """Completed-square evaluation: |d| (a'/c') tau_c' psi_c'(-b'^2 / (4 a')).

    Here d = gcd(a, c) and primes denote division by d; the sum vanishes
    when d does not divide b.
    """
    if not c:
        raise ValueError("modulus must be nonzero")
    F = c.F
    p = F.p
    u = F.inv(c.lc)
    c0, a, b = c.monic(), a.scale(u), b.scale(u)
    a = a % c0 if c0.deg > 0 else Poly(F)
    b = b % c0 if c0.deg > 0 else Poly(F)
    d = gcd_monic(a, c0) if a else c0
    if b and not d.divides(b):
        return Cyclo.zero(p)
    cp = c0.exact_div(d)
    size_d = Fraction(F.q) ** d.deg
    if cp.deg == 0:
        return Cyclo.rational(p, size_d)
    ap, bp = a.exact_div(d), b.exact_div(d) if b else Poly(F)
    four_a = (ap * 4) % cp
    shift = (-(bp * bp) * inv_mod(four_a, cp)) % cp
    R = ResidueRing.get(cp)
    phase = int(R.psi_exp[R.elem(shift)])
    return gauss_tau(cp) * Cyclo.zeta(p, phase) * (size_d * jacobi(ap, cp))
