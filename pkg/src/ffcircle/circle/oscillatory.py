"""The oscillatory integrals I_{g,r}(c).

``osc_integral_numeric`` sums the locally constant integrand

    (Q^/|r|) * 1{|t| < R^, |G(t)| < Q^ |r|} * psi(<c, t> / (g r))

over cells of K_inf^4.  ``osc_integral_closed`` is the five-branch case
analysis.  Its last branch, and I_{g,r}(0), come from
``osc_integral_shells``: split the detecting alpha-integral into shells
|alpha| = q^l, where each coordinate contributes a Gauss factor or a
constant and the shell itself is a sphere integral B_inf.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..characters import BudgetError, digit_cells, gauss_factor, kubota_integral_closed
from ..cyclo import Cyclo
from ..ffcore import Laurent, Poly, PrecisionError
from ..kloosterman import b_infinity_closed, kl_infinity, kl_infinity_closed
from .params import CVector, SystemParams

BRANCHES = ("kappa_large", "window_zero", "kappa_small", "dominant_34", "kloosterman")


def _cells(F, R: int, D: int, budget: int) -> np.ndarray:
    """Digit rows for degrees D..R-1, column i holding degree D + i."""
    if D >= R:
        return np.zeros((1, 0), dtype=np.int64)
    rows = digit_cells(F, R - 1, D, budget)
    return rows[:, ::-1]


def _poly_times_digits(F, P: Poly, X: np.ndarray) -> np.ndarray:
    """Coefficient rows of P * x, x given by digit rows (same offset)."""
    n, L = X.shape
    out = np.zeros((n, L + max(P.deg, 0)), dtype=np.int64)
    for i, a in enumerate(P.c):
        if a:
            out[:, i : i + L] = F.vadd(out[:, i : i + L], F.vmul(X, a))
    return out


def _square_digits(F, X: np.ndarray) -> np.ndarray:
    n, L = X.shape
    out = np.zeros((n, max(2 * L - 1, 0)), dtype=np.int64)
    for i in range(L):
        out[:, i : i + L] = F.vadd(out[:, i : i + L], F.vmul(X, X[:, i : i + 1]))
    return out


def _top_block(F, coeffs: np.ndarray, offset: int, lo: int, hi: int) -> np.ndarray:
    """Columns for degrees lo..hi of coefficient rows starting at degree ``offset``."""
    n = coeffs.shape[0]
    out = np.zeros((n, max(hi - lo + 1, 0)), dtype=np.int64)
    for d in range(lo, hi + 1):
        j = d - offset
        if 0 <= j < coeffs.shape[1]:
            out[:, d - lo] = coeffs[:, j]
    return out


def _coordinate_data(p: SystemParams, r: Poly, c: Poly, j: int, D: int, lo: int, hi: int, budget: int):
    """Per-coordinate (top-part vectors, phase exponents) for every cell of t_j."""
    F, g, R = p.F, p.g, p.R
    X = _cells(F, R, D, budget)
    L = X.shape[1]
    eta, lam = p.form.eta[j], p.lam[j]
    # g eta t^2 at offset 2D, 2 eta lam t at offset D
    quad = _poly_times_digits(F, g * eta, _square_digits(F, X)) if L else np.zeros((X.shape[0], 0), dtype=np.int64)
    lin = _poly_times_digits(F, (eta * lam).scale(F.from_int(2)), X) if L else np.zeros((X.shape[0], 0), dtype=np.int64)
    top = F.vadd(_top_block(F, quad, 2 * D, lo, hi), _top_block(F, lin, D, lo, hi))
    # psi(c t / (g r)): linear in the digits of t
    phase = np.zeros(X.shape[0], dtype=np.int64)
    if c and L:
        w = Laurent.from_rational(c, g * r, prec=-1 - D - L - 2)
        for i in range(L):
            wi = w.coeff(-1 - (D + i))
            if wi:
                phase = F.vadd(phase, F.vmul(X[:, i], wi))
    return top, F.vtrace(phase), X.shape[0]


def _encode(F, V: np.ndarray) -> np.ndarray:
    code = np.zeros(V.shape[0], dtype=np.int64)
    for i in range(V.shape[1] - 1, -1, -1):
        code = code * F.q + V[:, i]
    return code


def _default_depth(p: SystemParams, r: Poly, c: CVector) -> int:
    # G changes by less than q^(deg g + R + D) when t moves by < q^D, so the
    # indicator is fixed once D <= deg r + 1; the phase needs D <= deg(gr) - deg c - 1.
    D = min(r.deg + 1, p.R)
    if not c.is_zero():
        D = min(D, p.g.deg + r.deg - c.deg - 1)
    return D


def _cell_sum(p: SystemParams, r: Poly, c: CVector, D: int, budget: int) -> Cyclo:
    F, g, R, Q = p.F, p.g, p.R, p.Q
    Pp = F.p
    D = min(D, R)
    T = Q + r.deg + g.deg  # |G| < Q^|r|  <=>  deg(g G) < T
    hi = max(g.deg + 1 + 2 * (R - 1), max(x.deg for x in p.lam) + 1 + R - 1, p.k.deg, T)
    if (q_cells := F.q ** (2 * max(R - D, 0))) > budget:
        raise BudgetError(f"{q_cells} cell pairs exceed the budget {budget}")
    data = [_coordinate_data(p, r, c[j], j, D, T, hi, budget) for j in range(4)]
    ktop = np.array([p.k.coeff(d) for d in range(T, hi + 1)], dtype=np.int64)

    def pair(a, b, target=None):
        ta, ea, na = a
        tb, eb, nb = b
        V = F.vadd(np.repeat(ta, nb, axis=0), np.tile(tb, (na, 1)))
        if target is not None:
            V = F.vsub(np.broadcast_to(target, V.shape), V)
        e = (np.repeat(ea, nb) + np.tile(eb, na)) % Pp
        return _encode(F, V), e

    k12, e12 = pair(data[0], data[1])
    k34, e34 = pair(data[2], data[3], ktop)
    size = F.q ** (hi - T + 1)
    H12 = np.zeros((size, Pp), dtype=np.int64)
    H34 = np.zeros((size, Pp), dtype=np.int64)
    np.add.at(H12, (k12, e12), 1)
    np.add.at(H34, (k34, e34), 1)
    counts = np.zeros(Pp, dtype=np.int64)
    for a in range(Pp):
        for b in range(Pp):
            counts[(a + b) % Pp] += int(np.dot(H12[:, a], H34[:, b]))
    cell = Fraction(F.q) ** (4 * D)
    return Cyclo.from_counts(Pp, counts, Fraction(F.q) ** Q / Fraction(F.q) ** r.deg * cell)


def osc_integral_numeric(p: SystemParams, r: Poly, c, depth: int | None = None, budget: int = 10**7) -> Cyclo:
    """I_{g,r}(c) by exact cell summation, re-checked one digit deeper.

    ``depth`` is the lowest digit degree of t resolved; the default is the
    largest depth at which the integrand is constant on cells.
    """
    c = CVector.make(p.F, c)
    if not r.is_monic():
        raise ValueError("r must be monic")
    D = _default_depth(p, r, c) if depth is None else depth
    first = _cell_sum(p, r, c, D, budget)
    second = _cell_sum(p, r, c, min(D, p.R) - 1, budget)
    if first != second:
        raise PrecisionError(f"oscillatory integral not stable at depth {D}")
    return first


def osc_branch(p: SystemParams, r: Poly, c) -> str:
    """Which case of the closed form applies."""
    c = CVector.make(p.F, c)
    R, Q = p.R, p.Q
    kap = c.kappa_exp(p.g)
    even = p.f.deg % 2 == 0
    edge = kap is not None and kap == r.deg - R
    if kap is not None and kap >= Q - R:
        return "kappa_large"
    if edge and even and Q - 3 < r.deg <= Q:
        return "window_zero"
    if kap is None or kap < r.deg - R:
        return "kappa_small"
    if edge and even and r.deg <= Q - 3 and max(c[2].deg, c[3].deg) > max(c[0].deg, c[1].deg):
        return "dominant_34"
    return "kloosterman"


def kl_argument(p: SystemParams, r: Poly, c, arg: str = "k") -> Laurent:
    """k F*(c) / (4 r^2 g^3), or f F*(c) / (4 r^2 g^4) with ``arg="f"``."""
    c = CVector.make(p.F, c)
    F, g = p.F, p.g
    num, den = p.form.dual(c.c)
    if arg == "k":
        top, bot = p.k * num, den * r * r * g * g * g
    elif arg == "f":
        top, bot = p.f * num, den * r * r * g * g * g * g
    else:
        raise ValueError(f"unknown argument convention {arg!r}")
    top = top.scale(F.inv(F.from_int(4)))
    d = top.deg - bot.deg
    return Laurent.from_rational(top, bot, prec=d - abs(d) - 12)


def osc_integral_closed(
    p: SystemParams,
    r: Poly,
    c,
    form: str = "shells",
    arg: str = "k",
    convention: str = "stationary",
    return_branch: bool = False,
):
    """I_{g,r}(c) from the case analysis (|r| <= q^Q).

    The four vanishing / I(0) branches are applied as stated, with I(0)
    itself from :func:`osc_integral_shells`.  In the last branch
    ``form="shells"`` (default) evaluates the shell decomposition, and
    ``form="literal"`` the single Kloosterman term
    -Q^^2 |g|^2 |r|^2 |F*(c)|^-1 Kl_inf(k F*(c) / (4 r^2 g^3)), which misses
    the factor |Delta|^-1/2 and the condition that the critical shell lies
    inside the unit ball beyond every coordinate threshold.
    """
    c = CVector.make(p.F, c)
    F, g, Q = p.F, p.g, p.Q
    if r.deg > Q:
        raise ValueError(f"|r| = q^{r.deg} exceeds q^Q = q^{Q}")
    branch = osc_branch(p, r, c)
    if branch in ("kappa_large", "window_zero"):
        val = Cyclo.zero(F.p)
    elif branch in ("kappa_small", "dominant_34"):
        val = osc_integral_zero(p, r)
    elif form == "shells":
        val = osc_integral_shells(p, r, c)
    elif form == "literal":
        alpha = kl_argument(p, r, c, arg)
        kl = kl_infinity_closed(alpha, convention=convention)
        val = -kl * (Fraction(F.q) ** (2 * Q + 2 * g.deg + 2 * r.deg - p.form.dual_norm_exp(c.c)))
    else:
        raise ValueError(f"unknown form {form!r}")
    return (val, branch) if return_branch else val


def osc_integral_zero(p: SystemParams, r: Poly) -> Cyclo:
    """I_{g,r}(0); it depends on r only through deg r."""
    return _izero(p, r.deg)


def _izero(p: SystemParams, d: int) -> Cyclo:
    key = ("izero", d)
    if key not in p.extra:
        p.extra[key] = osc_integral_shells(p, Poly.monomial(p.F, d), (0, 0, 0, 0))
    return p.extra[key]


def osc_integral_closed_direct_kl(p: SystemParams, r: Poly, c, arg: str = "k") -> Cyclo:
    """The last branch with Kl_inf evaluated by sphere integration."""
    c = CVector.make(p.F, c)
    F, g, Q = p.F, p.g, p.Q
    alpha = kl_argument(p, r, c, arg)
    scale = Fraction(F.q) ** (2 * Q + 2 * g.deg + 2 * r.deg - p.form.dual_norm_exp(c.c))
    return -kl_infinity(alpha) * scale


def _rational_laurent(num: Poly, den: Poly) -> Laurent:
    d = num.deg - den.deg
    return Laurent.from_rational(num, den, prec=d - abs(d) - 12)


def osc_integral_shells(p: SystemParams, r: Poly, c, sign: int = 1) -> Cyclo:
    """I_{g,r}(c) from the shell decomposition of the alpha-integral.

    Detecting |G| < Q^|r| by an integral over alpha in the unit ball and
    integrating each t_i separately gives, on the shell |alpha| = q^l, a
    product of one-variable factors: R^ * G(alpha eta_i t^(2R) / (r t^Q)) when
    the critical point of coordinate i lies in |t_i| < R^, and R^ or 0
    otherwise.  The remaining alpha-integral over the shell is a sphere
    integral B_inf (or a Kubota integral when no phase survives).  Below the
    lowest active shell every factor is trivial and the rest is one Kubota
    ball.  The B_inf argument is sign * k F*_CR / (4 r^2 g^3), where F*_CR
    sums c_i^2 / eta_i over the coordinates with a critical point; the
    opposite ``sign`` is kept only to exhibit that it fails.
    """
    c = CVector.make(p.F, c).c
    F, g, R, Q, k = p.F, p.g, p.R, p.Q, p.k
    Pp, q = F.p, F.q
    eta = p.form.eta
    nu_inv = F.inv(p.form.nu)
    # coordinate data: critical-point threshold and whether NCR kills the shell
    kexp, big = [], []
    for ci, ei in zip(c, eta):
        if ci:
            kexp.append(ci.deg + Q - R - g.deg - ei.deg)
            big.append(ci.deg - g.deg >= r.deg - R)
        else:
            kexp.append(None)
            big.append(False)
    ords = [ei.deg + 2 * R - Q - r.deg for ei in eta]  # ord of the Gauss argument is l + ords[i]
    gamma = _rational_laurent(-k, r * g * Poly.monomial(F, Q))
    scale = Fraction(q) ** Q / Fraction(q) ** r.deg * Fraction(q) ** (4 * R)
    if any(big):
        low = max(kx + 1 for kx, b in zip(kexp, big) if b)
        tail = None
    else:
        trivial_from = min([-ords[i] for i in range(4)] + [kx + 1 for kx in kexp if kx is not None])
        low = min(trivial_from, 0)
        tail = low
    total = Cyclo.zero(Pp)
    if tail is not None:
        total = total + kubota_integral_closed(gamma, tail)
    for l in range(low, 0):
        factor = Cyclo.one(Pp)
        alt = Cyclo.one(Pp)
        fs_num, fs_den, dead = Poly(F), Poly.const(F, 1), False
        for i in range(4):
            ci, ei = c[i], eta[i]
            cr = kexp[i] is None or l > kexp[i]
            if not cr:
                if big[i]:
                    dead = True
                    break
                continue
            o = l + ords[i]
            lc = ei.lc
            factor = factor * gauss_factor(Laurent(F, {o: lc}))
            alt = alt * gauss_factor(Laurent(F, {o: F.mul(lc, p.form.nu)}))
            if ci:
                # c_i^2 / eta_i over the common denominator t - 1
                sq = ci * ci
                if ei.deg == 0:
                    term = (sq.scale(F.inv(ei.lc)) * p.form.t_minus_1, p.form.t_minus_1)
                else:
                    term = (sq.scale(F.inv(ei.lc)), p.form.t_minus_1)
                fs_num = fs_num + term[0]
                fs_den = p.form.t_minus_1
        if dead:
            continue
        if factor != alt:
            raise NotImplementedError(f"shell {l}: Gauss factors depend on the top digit of alpha")
        if fs_num:
            top = (k * fs_num).scale(F.mul(F.inv(F.from_int(4)), F.from_int(sign)))
            beta = _rational_laurent(top, fs_den * r * r * g * g * g)
            a = l + k.deg - r.deg - g.deg - Q
            shell = b_infinity_closed(a, beta) * (Fraction(q) ** (r.deg + g.deg + Q - k.deg))
        else:
            shell = kubota_integral_closed(gamma, l + 1) - kubota_integral_closed(gamma, l)
        total = total + factor * shell
    return total * scale
