"""Counting solutions, and the exact delta-method expansion of the count.

``count_solutions`` enumerates x = g t + lambda with |t| < R^ directly.
``delta_reconstruct`` evaluates

    N = (1 / (|g| Q^^2)) sum_{r monic, |r| <= Q^} sum_c |gr|^-4 S_{g,r}(c) I_{g,r}(c)

where the c-sum stops at |c| <= |g| because I vanishes beyond it.  The two
agree exactly; the expansion is an identity, not an asymptotic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..characters import BudgetError
from ..cyclo import Cyclo
from ..ffcore import Poly, iter_monic_upto, iter_polys
from ..kloosterman import weil_check
from .expsum import exp_sum_closed, exp_sum_direct_table
from .oscillatory import osc_integral_closed
from .params import CVector, SystemParams, beta_of_c

DEFAULT_BUDGET = 10**8


def _coeff_rows(F, polys, width: int) -> np.ndarray:
    out = np.zeros((len(polys), width), dtype=np.int64)
    for i, P in enumerate(polys):
        out[i, : len(P.c)] = P.c
    return out


def _encode_rows(F, rows: np.ndarray) -> np.ndarray:
    code = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1] - 1, -1, -1):
        code = code * F.q + rows[:, j]
    return code


def count_solutions(p: SystemParams, budget: int = DEFAULT_BUDGET) -> int:
    """#{x in O^4 : F(x) = f, x = lambda mod g, |x| <= q^(deg f // 2)}.

    Pairs (x1, x2) and (x3, x4) are tabulated separately and matched on the
    value of F, so the work is about q^(2R) rather than q^(4R).
    """
    F, g, R = p.F, p.g, p.R
    if R <= 0:
        return int(not p.f and all(not x for x in p.lam))
    n = F.q**R
    if n * n > budget:
        raise BudgetError(f"count needs {n * n} pair evaluations (budget {budget})")
    ts = list(iter_polys(F, R - 1))
    width = max(p.f.deg, 2 * (g.deg + R - 1) + 1) + 1
    if width * np.log2(F.q) > 62:
        raise BudgetError("values too long to encode in 64 bits")
    vals = []
    for eta, lam in zip(p.form.eta, p.lam):
        xs = [g * t + lam for t in ts]
        vals.append(_coeff_rows(F, [eta * x * x for x in xs], width))

    def pair(a, b):
        return F.vadd(a[:, None, :], b[None, :, :]).reshape(-1, width)

    left = pair(vals[0], vals[1])
    target = _encode_rows(F, F.vsub(_coeff_rows(F, [p.f], width), left))
    right = _encode_rows(F, pair(vals[2], vals[3]))
    keys, counts = np.unique(right, return_counts=True)
    pos = np.searchsorted(keys, target)
    pos = np.minimum(pos, keys.size - 1)
    hit = keys[pos] == target
    return int(counts[pos[hit]].sum())


def c_candidates(p: SystemParams) -> list[tuple[Poly, Poly, Poly, Poly]]:
    """All c with deg c_i <= deg g that can carry S != 0.

    For admissible systems these are c = 2 beta A lambda + g d with beta mod g
    and d constant; otherwise every c in the window is returned.
    """
    F, g = p.F, p.g
    cvals = list(iter_polys(F, g.deg))
    if not p.admissible or g.deg == 0:
        return list(itertools.product(cvals, repeat=4))
    two = F.from_int(2)
    al = [x.scale(two) for x in p.a_lambda]
    consts = [Poly.const(F, a) for a in F.elements()]
    seen = set()
    out = []
    for beta in iter_polys(F, g.deg - 1):
        base = [(beta * a) % g for a in al]
        for d in itertools.product(consts, repeat=4):
            c = tuple(b + g * di for b, di in zip(base, d))
            key = tuple(x.c for x in c)
            if key not in seen:
                seen.add(key)
                out.append(c)
    return out


@dataclass
class DeltaTerm:
    r: Poly
    c: tuple
    S: Cyclo
    I: Cyclo
    branch: str

    @property
    def weight(self) -> Fraction:
        q = self.r.F.q
        return Fraction(1, q ** (4 * self.r.deg))

    def value(self, g: Poly) -> Cyclo:
        return self.S * self.I * (self.weight / Fraction(g.norm()) ** 4)


@dataclass
class DeltaExpansion:
    p: SystemParams
    terms: list = field(default_factory=list)
    s_method: str = "direct"

    @property
    def normalizer(self) -> Fraction:
        q = self.p.q
        return Fraction(1, self.p.g.norm() * q ** (2 * self.p.Q))

    def total(self, select=None) -> Cyclo:
        acc = Cyclo.zero(self.p.F.p)
        for t in self.terms:
            if select is None or select(t):
                acc = acc + t.value(self.p.g)
        return acc * self.normalizer


def _s_values(p: SystemParams, r: Poly, method: str, budget: int):
    """Yield (c, S) for the nonzero S_{g,r}(c) in the window |c| <= |g|."""
    F = p.F
    if method == "direct":
        cvals = list(iter_polys(F, p.g.deg))
        table = exp_sum_direct_table(p, r, cvals, budget)
        rows = table.reshape(-1, F.p)
        nz = np.nonzero((rows != rows[:, :1]).any(axis=1))[0]
        n = len(cvals)
        for flat in nz:
            idx = np.unravel_index(flat, (n,) * 4)
            yield tuple(cvals[i] for i in idx), Cyclo.from_counts(F.p, table[idx])
    elif method == "closed":
        for c in c_candidates(p):
            S = exp_sum_closed(p, r, c)
            if not S.is_zero():
                yield c, S
    else:
        raise ValueError(f"unknown method {method!r}")


def delta_expansion(p: SystemParams, s_method: str | None = None, budget: int = DEFAULT_BUDGET) -> DeltaExpansion:
    """Every nonzero term |gr|^-4 S I of the expansion, with its branch label.

    ``s_method`` is "closed" (the closed form, admissible systems
    only) or "direct" (summation); the default is closed when admissible.
    """
    if s_method is None:
        s_method = "closed" if p.admissible else "direct"
    if s_method == "closed" and not p.admissible:
        raise ValueError("closed S needs an admissible system")
    exp = DeltaExpansion(p, s_method=s_method)
    for r in iter_monic_upto(p.F, p.Q):
        for c, S in _s_values(p, r, s_method, budget):
            I, branch = osc_integral_closed(p, r, c, return_branch=True)
            if not I.is_zero():
                exp.terms.append(DeltaTerm(r, c, S, I, branch))
    return exp


def delta_reconstruct(p: SystemParams, s_method: str | None = None, budget: int = DEFAULT_BUDGET) -> complex:
    """The delta-method expansion of N(w, lambda), as a complex number."""
    return complex(delta_expansion(p, s_method, budget).total())


def delta_reconstruct_exact(p: SystemParams, s_method: str | None = None, budget: int = DEFAULT_BUDGET) -> Cyclo:
    return delta_expansion(p, s_method, budget).total()


@dataclass
class ErrorTerms:
    main: Cyclo
    E1: Cyclo
    E2: Cyclo
    per_c: dict
    weil_ok: bool

    @property
    def total(self) -> Cyclo:
        return self.main + self.E1 + self.E2


def error_terms(p: SystemParams, s_method: str | None = None, budget: int = DEFAULT_BUDGET) -> ErrorTerms:
    """Split |g| Q^^2 N into the c = 0 terms, E1 and E2.

    For c != 0, E1 takes |r| <= R^ |c| q^(pi_c - 1) / |g| and E2 the rest.
    ``per_c`` maps each nonzero c to its (E1, E2) contributions.  ``weil_ok``
    records that every Kloosterman factor met in the closed S obeys the Weil
    bound (only checked when S is taken in closed form).
    """
    exp = delta_expansion(p, s_method, budget)
    F, g = p.F, p.g
    zero = Cyclo.zero(F.p)
    main, e1, e2 = zero, zero, zero
    per_c: dict = {}
    weil_ok = True
    for t in exp.terms:
        v = t.value(g)
        cv = CVector(t.c)
        if cv.is_zero():
            main = main + v
            continue
        key = tuple(str(x) for x in t.c)
        a, b = per_c.get(key, (zero, zero))
        # |r| <= R^ |c| q^(pi - 1) / |g| on the exponent scale
        if t.r.deg <= p.R + cv.deg + cv.pi(p.f) - 1 - g.deg:
            e1, a = e1 + v, a + v
        else:
            e2, b = e2 + v, b + v
        per_c[key] = (a, b)
        if exp.s_method == "closed" and not _weil_certificate(p, t.r, t.c):
            weil_ok = False
    return ErrorTerms(main, e1, e2, per_c, weil_ok)


def _weil_certificate(p: SystemParams, r: Poly, c) -> bool:
    from ..characters import reduce_mod
    from ..ffcore import inv_mod, m_part

    g = p.g
    m = m_part(g, r)
    mod = m * m * r
    if mod.deg == 0:
        return True
    gm = g.exact_div(m)
    gbar = inv_mod(gm, mod)
    num, den = p.form.dual(c)
    try:
        fstar = reduce_mod((num, den) if den.deg > 0 else num, mod)
    except Exception:
        return True  # vanishing clause: S = 0 and no Kloosterman sum appears
    n_arg = gbar * gbar * gbar * fstar
    ok = True
    for s in iter_polys(p.F, m.deg - 1) if m.deg > 0 else [Poly(p.F)]:
        ok &= weil_check(mod, gbar * p.f - m * r * s, n_arg)
    return ok


def exceptional_census(p: SystemParams, r: Poly, T: int, method: str = "direct", budget: int = DEFAULT_BUDGET) -> int:
    """#{c : S_{g,r}(c) != 0, 0 < |c| <= q^T}."""
    F = p.F
    if method == "direct":
        cvals = list(iter_polys(F, T))
        table = exp_sum_direct_table(p, r, cvals, budget)
        flat = table.reshape(-1, F.p)
        # equal zeta-power multiplicities sum to zero in Q(zeta_p)
        nz = (flat != flat[:, :1]).any(axis=1)
        return int(nz.sum()) - int(nz[0])
    count = 0
    for c in itertools.product(list(iter_polys(F, T)), repeat=4):
        if any(c) and not exp_sum_closed(p, r, c).is_zero():
            count += 1
    return count


def tls_kernel(p: SystemParams, c, T: int, variant: str = "finite", delta: Poly | None = None) -> Cyclo:
    """Reduced sum over monic r with deg r = T, (g, r) = 1, delta | r.

    Each term is psi(-rbar (beta (f - F(lambda)) + <lambda, c>) / g^2)
    Kl_r(gbar f, gbar^3 F*(c) / 4), times Kl_inf(f F*(c) / (4 r^2 g^4)) for
    ``variant="with_infinity"``.  Terms where F*(c) has a (t-1) denominator
    not invertible mod r are skipped; no beta(c) gives 0.
    """
    from ..tlsweep import moduli, reduced_term

    if variant not in ("finite", "with_infinity"):
        raise ValueError("variant must be finite or with_infinity")
    F, g = p.F, p.g
    c = CVector.make(F, c).c
    delta = Poly.const(F, 1) if delta is None else delta.monic()
    beta = beta_of_c(c, p)
    if beta is None:
        return Cyclo.zero(F.p)
    g2 = g * g
    alpha = -(beta * (p.f - p.form.value(p.lam)) + _lam_dot(p, c))
    alpha = alpha % g2 if g2.deg > 0 else Poly(F)
    num, den = p.form.dual(c)
    quarter = Poly.const(F, F.inv(F.from_int(4)))
    a = (p.f, g)
    b = (quarter * num, g * g * g * den)
    if variant == "with_infinity" and not num:
        raise ValueError("Kl_inf needs F*(c) != 0")
    acc = Cyclo.zero(F.p)
    for r in moduli(F, g, delta, T):
        td = reduced_term(F, g, alpha, a, b, r, variant == "with_infinity")
        if td is not None:
            acc = acc + td.value
    return acc


def _lam_dot(p: SystemParams, c) -> Poly:
    """<lambda, c> = sum lambda_i c_i."""
    acc = Poly(p.F)
    for li, ci in zip(p.lam, c):
        acc = acc + li * ci
    return acc


__all__ = [
    "DeltaExpansion",
    "DeltaTerm",
    "ErrorTerms",
    "c_candidates",
    "count_solutions",
    "delta_expansion",
    "delta_reconstruct",
    "delta_reconstruct_exact",
    "error_terms",
    "exceptional_census",
    "tls_kernel",
]
