"""The Morgenstern form, system parameters (F, f, g, lambda) and dual vectors c."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..ffcore import GF, Laurent, Poly, PolyError, gcd_monic, inv_mod


@dataclass(frozen=True)
class MorgensternForm:
    """x1^2 - nu x2^2 - (t-1) x3^2 + nu (t-1) x4^2 with nu a non-square."""

    F: GF
    nu: int

    def __post_init__(self):
        if self.F.chi(self.nu) != -1:
            raise ValueError(f"nu = {self.F.format(self.nu)} is not a non-square in F_{self.F.q}")

    @classmethod
    def make(cls, q: int, nu: int | None = None) -> "MorgensternForm":
        F = GF.get(q)
        return cls(F, F.first_nonsquare() if nu is None else F.from_int(nu) if F.n == 1 else nu)

    @cached_property
    def t_minus_1(self) -> Poly:
        return Poly(self.F, [self.F.neg(1), 1])

    @cached_property
    def eta(self) -> tuple[Poly, Poly, Poly, Poly]:
        F, nu, s = self.F, self.nu, self.t_minus_1
        return (Poly.const(F, 1), Poly.const(F, F.neg(nu)), -s, s.scale(nu))

    @cached_property
    def disc(self) -> Poly:
        e = self.eta
        return e[0] * e[1] * e[2] * e[3]

    def value(self, x) -> Poly:
        acc = Poly(self.F)
        for e, xi in zip(self.eta, x):
            acc = acc + e * xi * xi
        return acc

    def bilinear_a(self, lam, x) -> Poly:
        """lambda^T A x."""
        acc = Poly(self.F)
        for e, li, xi in zip(self.eta, lam, x):
            acc = acc + e * li * xi
        return acc

    def dual(self, c) -> tuple[Poly, Poly]:
        """F*(c) = sum c_i^2 / eta_i as a reduced pair (num, den), den monic."""
        F, nu_inv, s = self.F, self.F.inv(self.nu), self.t_minus_1
        num = s * (c[0] * c[0] - (c[1] * c[1]).scale(nu_inv)) - c[2] * c[2] + (c[3] * c[3]).scale(nu_inv)
        if not num:
            return num, Poly.const(F, 1)
        if s.divides(num):
            return num.exact_div(s), Poly.const(F, 1)
        return num, s

    def dual_poly(self, c) -> Poly:
        num, den = self.dual(c)
        if den.deg > 0:
            raise PolyError("F*(c) is not a polynomial")
        return num

    def dual_norm_exp(self, c) -> int:
        num, den = self.dual(c)
        return num.deg - den.deg

    def dual_laurent(self, c, prec: int) -> Laurent:
        num, den = self.dual(c)
        return Laurent.from_rational(num, den, prec)


def _as_poly(F: GF, x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, str):
        return Poly.parse(F, x)
    if isinstance(x, int):
        return Poly.const(F, F.from_int(x))
    raise TypeError(f"cannot read {x!r} as a polynomial")


@dataclass(frozen=True)
class SystemParams:
    """The system F(x) = f, x = lambda mod g, with its derived quantities.

    ``admissible`` records (f Delta, g) = 1 together with some lambda_i prime
    to g; the closed form for S needs it, the counting identity does not.
    """

    form: MorgensternForm
    f: Poly
    g: Poly
    lam: tuple[Poly, Poly, Poly, Poly]
    extra: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def make(cls, q: int, f, g, lam=(0, 0, 0, 0), nu: int | None = None) -> "SystemParams":
        form = MorgensternForm.make(q, nu)
        F = form.F
        g = _as_poly(F, g)
        if not g:
            raise ValueError("g must be nonzero")
        g = g.monic()
        lam = tuple(_as_poly(F, x) % g if g.deg > 0 else Poly(F) for x in lam)
        if len(lam) != 4:
            raise ValueError("lambda needs four coordinates")
        return cls(form, _as_poly(F, f), g, lam)

    def __post_init__(self):
        if not self.f:
            raise ValueError("f must be nonzero")
        if any(li.deg >= max(self.g.deg, 0) and li for li in self.lam):
            raise ValueError("lambda_i must have degree < deg g")
        if not self.g.divides(self.f - self.form.value(self.lam)):
            raise ValueError("g does not divide f - F(lambda); k is not integral")

    @property
    def F(self) -> GF:
        return self.form.F

    @property
    def q(self) -> int:
        return self.form.F.q

    @cached_property
    def k(self) -> Poly:
        return (self.f - self.form.value(self.lam)).exact_div(self.g)

    @property
    def R(self) -> int:
        return self.f.deg // 2 - self.g.deg + 1

    @property
    def Q(self) -> int:
        return self.R + 1

    @cached_property
    def admissible(self) -> bool:
        g = self.g
        if g.deg == 0:
            return True
        fd = self.f * self.form.disc
        if gcd_monic(fd, g).deg > 0:
            return False
        return any(li and gcd_monic(li, g).deg == 0 for li in self.lam)

    @cached_property
    def a_lambda(self) -> tuple[Poly, ...]:
        return tuple(e * li for e, li in zip(self.form.eta, self.lam))

    def describe(self) -> dict:
        return {
            "q": self.q,
            "nu": self.F.format(self.form.nu),
            "f": str(self.f),
            "g": str(self.g),
            "lambda": [str(x) for x in self.lam],
            "k": str(self.k),
            "R": self.R,
            "Q": self.Q,
            "admissible": self.admissible,
        }


@dataclass(frozen=True)
class CVector:
    c: tuple[Poly, Poly, Poly, Poly]

    @classmethod
    def make(cls, F: GF, c) -> "CVector":
        return cls(tuple(_as_poly(F, x) for x in c))

    def __iter__(self):
        return iter(self.c)

    def __getitem__(self, i):
        return self.c[i]

    def is_zero(self) -> bool:
        return not any(self.c)

    @property
    def deg(self) -> int:
        """log_q |c| (max over coordinates), -1 standing in for c = 0."""
        return max((x.deg for x in self.c), default=-1)

    def kappa_exp(self, g: Poly) -> int | None:
        """log_q kappa = deg c - deg g, or None when c = 0 (kappa = 0)."""
        if self.is_zero():
            return None
        return self.deg - g.deg

    def pi(self, f: Poly) -> int:
        d34 = max(self.c[2].deg, self.c[3].deg)
        d12 = max(self.c[0].deg, self.c[1].deg)
        return 0 if (d34 > d12 and f.deg % 2 == 0) else 1

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.c) + ")"


def beta_of_c(c, p: SystemParams) -> Poly | None:
    """Smallest beta mod g with c = 2 beta A lambda mod g, or None."""
    F, g = p.F, p.g
    cs = CVector.make(F, c).c
    if g.deg == 0:
        return Poly(F)
    two = F.from_int(2)
    al = [x.scale(two) % g for x in p.a_lambda]
    cs = [x % g for x in cs]
    for ai, ci in zip(al, cs):
        if ai and gcd_monic(ai, g).deg == 0:
            beta = (ci * inv_mod(ai, g)) % g
            ok = all(((beta * aj) - cj) % g == Poly(F) for aj, cj in zip(al, cs))
            return beta if ok else None
    # no coordinate of 2 A lambda is a unit: search residues in order
    from ..ffcore import iter_polys

    for beta in iter_polys(F, g.deg - 1):
        if all(((beta * aj) - cj) % g == Poly(F) for aj, cj in zip(al, cs)):
            return beta
    return None
