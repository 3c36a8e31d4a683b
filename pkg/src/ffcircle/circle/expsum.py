"""The exponential sums S_{g,r}(c): direct summation and the closed form.

Summing over l mod g and a mod r (a prime to r) is the same as summing
A = a + r l over residues mod gr prime to r.  The b-sum then splits into four
one-variable sums, one per coordinate, which is what ``exp_sum_direct``
evaluates.  ``exp_sum_naive`` keeps the literal triple sum for tiny cases.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..characters import BudgetError, gauss_tau, psi_r_exp, reduce_mod
from ..cyclo import Cyclo, cyclic_mul
from ..ffcore import Poly, ResidueRing, gcd_monic, inv_mod, m_part
from ..kloosterman import kl_finite
from .params import CVector, SystemParams, beta_of_c

DEFAULT_BUDGET = 10**8


def _codes(R: ResidueRing, x: Poly) -> int:
    return R.elem(x % R.M) if R.n else 0


def _a_codes(R: ResidueRing, r: Poly, monic_a: bool) -> np.ndarray:
    """Residues A mod gr with gcd(A, r) = 1 (optionally with A mod r monic)."""
    if r.deg == 0:
        return np.arange(R.size, dtype=np.int64)
    Rr = ResidueRing.get(r)
    red = np.array([Rr.elem(R.poly(x) % r) for x in range(R.size)], dtype=np.int64)
    ok = Rr.inv[red] >= 0
    if monic_a:
        ok &= np.array([Rr.poly(int(x)).is_monic() for x in red])
    return np.nonzero(ok)[0].astype(np.int64)


def _setup(p: SystemParams, r: Poly, budget: int, monic_a: bool):
    M = p.g * r
    R = ResidueRing.get(M)
    N = R.size
    if 4 * N * N > budget:
        raise BudgetError(f"direct S needs {4 * N * N} evaluations (budget {budget})")
    A = _a_codes(R, r, monic_a)
    shift = R.psi_exp[R.mul(A, _codes(R, -p.k))]
    return R, A, shift


def _coordinate_counts(p: SystemParams, R: ResidueRing, A: np.ndarray, j: int, cvals) -> np.ndarray:
    """counts[a, i, e] = #{b mod gr : the j-th summand for (A[a], cvals[i]) is zeta^e}."""
    F, Pp, N = p.F, p.F.p, R.size
    eta, lam = p.form.eta[j], p.lam[j]
    b = np.arange(N, dtype=np.int64)
    X = R.add(R.mul(R.squares_table(), _codes(R, p.g * eta)), R.mul(b, _codes(R, (eta * lam).scale(F.from_int(2)))))
    AX = R.mul(A[:, None], X[None, :])
    cc = np.array([_codes(R, x) for x in cvals], dtype=np.int64)
    Y = R.mul(cc[:, None], b[None, :])
    z = R.sub(AX[:, None, :], Y[None, :, :])
    e = R.psi_exp[z]
    counts = np.zeros((A.size, len(cvals), Pp), dtype=np.int64)
    ia, ic = np.indices(e.shape[:2])
    np.add.at(counts, (np.repeat(ia.reshape(-1), N), np.repeat(ic.reshape(-1), N), e.reshape(-1)), 1)
    return counts


def exp_sum_direct(p: SystemParams, r: Poly, c, budget: int = DEFAULT_BUDGET, monic_a: bool = False) -> Cyclo:
    """S_{g,r}(c) by summation, exact in Q(zeta_p).

    The a-sum runs over all residues prime to r; ``monic_a`` restricts it to
    monic a, which does not satisfy the counting identity (kept for checks).
    """
    F = p.F
    if not r.is_monic():
        raise ValueError("r must be monic")
    c = CVector.make(F, c).c
    Pp = F.p
    if (p.g * r).deg == 0:
        return Cyclo.one(Pp)
    R, A, shift = _setup(p, r, budget, monic_a)
    prod = None
    for j in range(4):
        counts = _coordinate_counts(p, R, A, j, [c[j]])[:, 0, :]
        prod = counts if prod is None else cyclic_mul(prod, counts, Pp)
    total = np.zeros(Pp, dtype=np.int64)
    for s in range(Pp):
        rows = prod[shift == s]
        if rows.size:
            total += np.roll(rows.sum(axis=0), s)
    return Cyclo.from_counts(Pp, total)


def exp_sum_direct_table(p: SystemParams, r: Poly, cvals, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """S_{g,r}(c) for every c in cvals^4 at once.

    Returns integer counts of shape (n, n, n, n, p): entry [i1..i4, e] is the
    zeta^e multiplicity for c = (cvals[i1], ..., cvals[i4]).
    """
    F = p.F
    Pp = F.p
    cvals = [CVector.make(F, (x, 0, 0, 0)).c[0] for x in cvals]
    n = len(cvals)
    if (p.g * r).deg == 0:
        out = np.zeros((n,) * 4 + (Pp,), dtype=np.int64)
        out[..., 0] = 1
        return out
    R, A, shift = _setup(p, r, budget * 4, False)
    if R.size**4 * max(A.size, 1) >= 2**62:
        raise BudgetError("entries would overflow int64")
    T = [_coordinate_counts(p, R, A, j, cvals) for j in range(4)]
    # pair products over (c1, c2) and (c3, c4), then contract over A per zeta-power pair
    P12 = cyclic_mul(T[0][:, :, None, :], T[1][:, None, :, :], Pp).reshape(A.size, n * n, Pp)
    P34 = cyclic_mul(T[2][:, :, None, :], T[3][:, None, :, :], Pp).reshape(A.size, n * n, Pp)
    idx = (np.arange(Pp)[None, :] - shift[:, None]) % Pp
    P34 = np.take_along_axis(P34, idx[:, None, :], axis=2)
    out = np.zeros((n * n, n * n, Pp), dtype=np.int64)
    for i in range(Pp):
        Xi = P12[:, :, i].T
        for k in range(Pp):
            out[:, :, (i + k) % Pp] += Xi @ P34[:, :, k]
    return out.reshape((n,) * 4 + (Pp,))


def exp_sum_naive(p: SystemParams, r: Poly, c, budget: int = 10**7, monic_a: bool = False) -> Cyclo:
    """The literal sum over l, a and b in (O/(gr))^4; tiny moduli only."""
    F, g = p.F, p.g
    c = CVector.make(F, c).c
    M = g * r
    Pp = F.p
    if M.deg == 0:
        return Cyclo.one(Pp)
    R = ResidueRing.get(M)
    N = R.size
    Rr = ResidueRing.get(r) if r.deg > 0 else None
    a_list = [Poly(F)] if Rr is None else [Rr.poly(int(x)) for x in Rr.units]
    if monic_a:
        a_list = [a for a in a_list if a.is_monic() or r.deg == 0]
    l_list = [R.poly(0)] if g.deg == 0 else [ResidueRing.get(g).poly(x) for x in range(g.norm())]
    work = N**4 * len(a_list) * len(l_list)
    if work > budget:
        raise BudgetError(f"naive S needs {work} evaluations (budget {budget})")
    grid = np.indices((N,) * 4).reshape(4, -1)
    two = F.from_int(2)
    # 2 lam^T A b - k and g F(b), as codes mod gr
    lin = np.full(grid.shape[1], _codes(R, -p.k), dtype=np.int64)
    quad = np.zeros(grid.shape[1], dtype=np.int64)
    dot = np.zeros(grid.shape[1], dtype=np.int64)
    sq = R.squares_table()
    for j, (eta, lam, cj) in enumerate(zip(p.form.eta, p.lam, c)):
        lin = R.add(lin, R.mul(grid[j], _codes(R, (eta * lam).scale(two))))
        quad = R.add(quad, R.mul(sq[grid[j]], _codes(R, g * eta)))
        dot = R.add(dot, R.mul(grid[j], _codes(R, cj)))
    counts = np.zeros(Pp, dtype=np.int64)
    for l in l_list:
        for a in a_list:
            A1 = _codes(R, a + r * l)
            A0 = _codes(R, a)
            z = R.sub(R.add(R.mul(lin, A1), R.mul(quad, A0)), dot)
            counts += np.bincount(R.psi_exp[z], minlength=Pp)
    return Cyclo.from_counts(Pp, counts)


def _chi_const(F, x: int, e: int) -> int:
    """(x / r) for a constant x and monic r of degree e is chi(x)^e."""
    return F.chi(x) if e % 2 else 1


def exp_sum_closed(p: SystemParams, r: Poly, c, jacobi_factor: bool = True) -> Cyclo:
    """S_{g,r}(c) from the closed form (needs an admissible system).

    ``jacobi_factor`` multiplies by (-nu/r)(-nu/r'), r' = r/(r, t-1), the
    product of the four Jacobi symbols left over after completing squares.
    It is 1 whenever -nu is a square in F_q (for instance q = 3, nu = -1).
    """
    F, g, form = p.F, p.g, p.form
    Pp = F.p
    if not p.admissible:
        raise ValueError("closed form needs (f Delta, g) = 1 and some lambda_i prime to g")
    if not r.is_monic():
        raise ValueError("r must be monic")
    c = CVector.make(F, c).c
    s1 = form.t_minus_1
    d = gcd_monic(r, s1)
    if d.deg > 0 and not (d.divides(c[2]) and d.divides(c[3])):
        return Cyclo.zero(Pp)
    beta = beta_of_c(c, p)
    if beta is None:
        return Cyclo.zero(Pp)
    m = m_part(g, r)
    gm = g.exact_div(m)  # monic since g and m are
    rp = r.exact_div(d)
    q = F.q
    lead = Fraction(q) ** (4 * g.deg - 2 * m.deg) * Fraction(q) ** (2 * d.deg)
    gauss = gauss_tau(r) * gauss_tau(rp)
    gauss = gauss * gauss
    val = gauss * lead
    if jacobi_factor:
        minus_nu = F.neg(form.nu)
        val = val * (_chi_const(F, minus_nu, r.deg) * _chi_const(F, minus_nu, rp.deg))
    # phase modulo (g/m)^2
    lam_c = Poly(F)
    for li, ci in zip(p.lam, c):
        lam_c = lam_c + li * ci
    gm2 = gm * gm
    ph = 0
    if gm2.deg > 0:
        fk = (p.f - form.value(p.lam)).exact_div(m)
        num = -(inv_mod(m * r, gm2) * beta * fk) - inv_mod(m * m * r, gm2) * lam_c
        ph += psi_r_exp(num % gm2, gm2)
    ph += psi_r_exp(lam_c, g * g * r)
    # s-sum of Kloosterman sums modulo m^2 r
    mod = m * m * r
    if mod.deg == 0:
        ksum = Cyclo.one(Pp)
    else:
        gbar = inv_mod(gm, mod)
        num, den = form.dual(c)
        fstar = reduce_mod((num, den) if den.deg > 0 else num, mod)
        quarter = Poly.const(F, F.inv(F.from_int(4)))
        n_arg = (quarter * gbar * gbar * gbar * fstar) % mod
        ksum = Cyclo.zero(Pp)
        Rm = ResidueRing.get(m) if m.deg > 0 else None
        s_list = [Poly(F)] if Rm is None else [Rm.poly(x) for x in range(Rm.size)]
        gbar_m = inv_mod(gm, m) if m.deg > 0 else Poly(F)
        for s in s_list:
            tw = psi_r_exp(-(s * gbar_m * beta), m) if m.deg > 0 else 0
            ksum = ksum + Cyclo.zeta(Pp, tw) * kl_finite(mod, gbar * p.f - m * r * s, n_arg)
    return val * Cyclo.zeta(Pp, ph) * ksum
