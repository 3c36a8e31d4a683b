"""Local densities sigma_w and the singular series.

Counts modulo w^(k+v) come from the additive convolution of the four
one-variable value histograms.  Residue codes are base-p digit strings, so
the additive group is (Z/p)^N and the convolution is a multidimensional FFT,
rounded back to integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..characters import BudgetError
from ..cyclo import Cyclo
from ..ffcore import Poly, ResidueRing, iter_irreducible, iter_monic_upto, valuation
from .expsum import exp_sum_closed, exp_sum_direct
from .params import SystemParams

DEFAULT_MAX_RING = 3**12


def _pair_convolution(R: ResidueRing, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact additive convolution of two histograms over O/(M), as int64."""
    shape = (R.p,) * (R.n * R.F.n)
    conv = np.fft.ifftn(np.fft.fftn(a.reshape(shape)) * np.fft.fftn(b.reshape(shape))).real.reshape(-1)
    out = np.rint(conv)
    if np.abs(conv - out).max(initial=0.0) > 0.25 or out.sum() != a.sum() * b.sum():
        raise ArithmeticError("FFT convolution lost integrality")
    return out.astype(np.int64)


def _convolve_count(R: ResidueRing, hists: list[np.ndarray], target: int) -> int:
    """#{(x1..x4) : x1 + x2 + x3 + x4 = target} for the given value histograms.

    Pair convolutions have entries at most |R| and round safely; the final
    contraction is an exact integer dot product.
    """
    left = _pair_convolution(R, hists[0], hists[1])
    right = _pair_convolution(R, hists[2], hists[3])
    return int(np.dot(left, right[R.sub(target, np.arange(R.size))]))


def representation_count(p: SystemParams, w: Poly, e: int, v: int | None = None) -> int:
    """#{x mod w^e : F(x) = f mod w^e, x = lambda mod w^v}, v = v_w(g) by default."""
    if v is None:
        v = valuation(p.g, w)
    mod = w**e
    R = ResidueRing.get(mod)
    if R.size > DEFAULT_MAX_RING:
        raise BudgetError(f"ring of size {R.size} exceeds {DEFAULT_MAX_RING}")
    sq = R.squares_table()
    wv = R.elem(w**v)
    free = np.arange(R.size // (R.q ** (w.deg * v)), dtype=np.int64)
    hists = []
    for eta, lam in zip(p.form.eta, p.lam):
        x = R.add(R.elem(lam), R.mul(free, wv)) if v else free
        vals = R.mul(sq[x], R.elem(eta))
        hists.append(np.bincount(vals, minlength=R.size).astype(np.float64))
    return _convolve_count(R, hists, R.elem(p.f))


@dataclass
class LocalDensity:
    w: Poly
    values: list  # Fractions, k = 1 .. k_max
    stable_k: int | None

    @property
    def sigma(self) -> Fraction:
        return self.values[-1] if self.stable_k is None else self.values[self.stable_k - 1]


def local_density(p: SystemParams, w: Poly, k_max: int = 4, stop_when_stable: bool = True) -> LocalDensity:
    """The normalized counts #{x mod w^(k+v) : ...} / |w|^(3k) for k = 1..k_max.

    ``stable_k`` is the first k whose value repeats at k + 1 (None if no
    repeat is seen).  With ``stop_when_stable`` the sequence ends one step
    after stabilization is observed, or at the ring-size budget.
    """
    v = valuation(p.g, w)
    norm = p.q**w.deg
    values: list = []
    stable = None
    for k in range(1, k_max + 1):
        try:
            n = representation_count(p, w, k + v, v)
        except BudgetError:
            break
        values.append(Fraction(n, norm ** (3 * k)))
        if stable is None and len(values) >= 2 and values[-1] == values[-2]:
            stable = k - 1
            if stop_when_stable:
                break
    return LocalDensity(w, values, stable)


def singular_series_sum(p: SystemParams, T: int, method: str | None = None) -> Cyclo:
    """sum over monic r with deg r <= T of |gr|^-4 S_{g,r}(0)."""
    if method is None:
        method = "closed" if p.admissible else "direct"
    F = p.F
    zero = (0, 0, 0, 0)
    acc = Cyclo.zero(F.p)
    gn = Fraction(p.g.norm())
    for r in iter_monic_upto(F, T):
        S = exp_sum_closed(p, r, zero) if method == "closed" else exp_sum_direct(p, r, zero)
        acc = acc + S * (1 / (gn * F.q**r.deg) ** 4)
    return acc


@dataclass
class SingularProduct:
    value: Fraction
    factors: list  # LocalDensity per w
    unstable: list


def singular_series_product(p: SystemParams, D: int, k_max: int = 4) -> SingularProduct:
    """prod over monic irreducible w with deg w <= D of the stabilized sigma_w."""
    F = p.F
    val = Fraction(1)
    factors, unstable = [], []
    for d in range(1, D + 1):
        for w in iter_irreducible(F, d):
            ld = local_density(p, w, k_max)
            factors.append(ld)
            if ld.stable_k is None:
                unstable.append(w)
            val *= ld.sigma
    return SingularProduct(val, factors, unstable)


__all__ = [
    "LocalDensity",
    "SingularProduct",
    "local_density",
    "representation_count",
    "singular_series_product",
    "singular_series_sum",
]
