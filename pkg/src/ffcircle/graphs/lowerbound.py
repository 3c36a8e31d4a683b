"""Choosing g and running the diameter lower-bound experiments.

Bipartite family: g irreducible, t a non-square and -1 a square mod g, and the
target is W = diag(1, -1).  A path of length h from I to W yields u with
F(u) = t^h, g | u1, u3, u4, (g, u2) = 1 and (t-1) | u1 - 1, u2; that forces h
even and h >= 4 deg g.  Non-bipartite family: g = (t^2 + 1/4) r with t and -1
squares mod r, targets I' = [[1, r], [0, 1]] and W' = sqrt(-1) W.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from ..characters import BudgetError
from ..ffcore import GF, Poly, ResidueRing, gcd_monic, is_squarefree, iter_irreducible, iter_polys
from .cayley import DEFAULT_MAX_VERTICES, build_graph, default_nu, diameter, distance, group_orders

PROFILES = ("bipartite", "non_bipartite")


def _is_square_mod(g: Poly, x: Poly) -> bool:
    return bool(ResidueRing.get(g).euler_is_square(ResidueRing.get(g).elem(x)))


def profile_conditions(q: int, g: Poly, nu: int | None = None) -> dict:
    F = GF.get(q)
    nu = default_nu(q) if nu is None else nu
    tt = Poly.t(F)
    return {
        "prime_to_t(t-1)": gcd_monic(g, tt * (tt - Poly.const(F, 1))).deg == 0,
        "t_square": _is_square_mod(g, tt),
        "nu_square": _is_square_mod(g, Poly.const(F, nu)),
    }


def find_suitable_g(q: int, deg: int, profile: str = "bipartite", nu: int | None = None, exclude=()) -> Poly:
    """First monic irreducible g of degree ``deg`` matching the profile.

    bipartite: t a non-square, nu a square mod g; non_bipartite: both squares.
    Raises LookupError when no such g exists.
    """
    if profile not in PROFILES:
        raise ValueError(f"profile must be one of {PROFILES}")
    F = GF.get(q)
    for g in iter_irreducible(F, deg):
        if any(g == e for e in exclude):
            continue
        c = profile_conditions(q, g, nu)
        if not (c["prime_to_t(t-1)"] and c["nu_square"]):
            continue
        if c["t_square"] == (profile == "non_bipartite"):
            return g
    raise LookupError(f"no irreducible g of degree {deg} over F_{q} fits the {profile} profile")


def norm_witnesses(q: int, g: Poly, h: int, nu: int | None = None, budget: int = 10**7, limit: int = 5):
    """Solutions u of F(u) = t^h with g | u1, u3, u4, (g, u2) = 1, (t-1) | u1 - 1, u2.

    Returns (count, first ``limit`` witnesses).  Anisotropy bounds the
    degrees: deg u1, deg u2 <= h/2 and deg u3, deg u4 <= (h-1)/2.
    """
    F = GF.get(q)
    nu = default_nu(q) if nu is None else nu
    s1 = Poly(F, [F.neg(1), 1])
    one = Poly.const(F, 1)
    d12, d34 = h // 2, (h - 1) // 2
    mult34 = [g * a for a in iter_polys(F, d34 - g.deg)] if d34 >= g.deg else [Poly(F)]
    u1s = [g * a for a in iter_polys(F, d12 - g.deg)] if d12 >= g.deg else [Poly(F)]
    u1s = [u for u in u1s if s1.divides(u - one)]
    u2s = [s1 * b for b in iter_polys(F, d12 - 1)] if d12 >= 1 else []
    u2s = [u for u in u2s if gcd_monic(u, g).deg == 0]
    if len(u1s) * len(u2s) + len(mult34) ** 2 > budget:
        raise BudgetError("witness enumeration over budget")
    form_nu = Poly.const(F, nu)
    left: dict = {}
    for u1 in u1s:
        for u2 in u2s:
            left.setdefault(u1 * u1 - form_nu * u2 * u2, []).append((u1, u2))
    target = Poly.monomial(F, h)
    count, found = 0, []
    for u3 in mult34:
        for u4 in mult34:
            rest = target + s1 * (u3 * u3 - form_nu * u4 * u4)
            hits = left.get(rest, [])
            count += len(hits)
            for u1, u2 in hits[: max(0, limit - len(found))]:
                found.append(tuple(str(x) for x in (u1, u2, u3, u4)))
    return count, found


def _first_r(q: int, nu: int, base: Poly, max_deg: int = 8) -> Poly:
    for d in range(1, max_deg + 1):
        try:
            return find_suitable_g(q, d, "non_bipartite", nu, exclude=[base])
        except LookupError:
            continue
    raise LookupError(f"no suitable r of degree <= {max_deg} over F_{q}")


@dataclass
class LowerBoundReport:
    q: int
    g: str
    variant: str
    n_vertices: int
    diameter: int | None
    log_q_n: float
    four_thirds_log: float
    lps_upper: float
    distances: dict
    checks: dict
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def lower_bound_experiment(
    q: int,
    g=None,
    variant: str = "bipartite",
    r=None,
    nu: int | None = None,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    witness_budget: int = 10**6,
) -> LowerBoundReport:
    """Distances to the extremal targets, against (4/3) log_q |X| and 2 log_q |X|."""
    F = GF.get(q)
    nu = default_nu(q) if nu is None else nu
    if variant == "bipartite":
        g = find_suitable_g(q, 2, "bipartite", nu) if g is None else (g if isinstance(g, Poly) else Poly.parse(F, g))
        G = build_graph(q, g, nu, max_vertices)
        h = distance(G, G.identity, G.matrix((1, 0, 0, -1)))
        n = G.n
        lq = math.log(n, q)
        checks = {"even": h % 2 == 0, "at_least_4deg_g": h >= 4 * g.deg}
        witnesses = {}
        notes = []
        for hh in range(0, h + 1, 2):
            try:
                cnt, first = norm_witnesses(q, g, hh, nu, budget=witness_budget)
            except BudgetError:
                notes.append(f"witness enumeration for h = {hh} over budget")
                continue
            witnesses[hh] = {"count": cnt, "examples": first}
        return LowerBoundReport(
            q, str(g), variant, n, diameter(G), lq, 4 * lq / 3, 2 * lq, {"I->W": h}, checks, witnesses, notes
        )
    if variant != "non_bipartite":
        raise ValueError(f"variant must be one of {PROFILES}")
    quarter = F.inv(F.from_int(4))
    base = Poly(F, [quarter, 0, 1])
    if r is None:
        r = _first_r(q, nu, base)
    elif not isinstance(r, Poly):
        r = Poly.parse(F, r)
    gg = base * r
    if not is_squarefree(gg):
        raise ValueError(f"(t^2 + 1/4) r = {gg} is not squarefree")
    orders = group_orders(q, gg)
    if orders["PSL2"] > max_vertices:
        raise BudgetError(
            f"X^(q,(t^2+1/4)r) with r = {r} has |PSL2| = {orders['PSL2']} vertices, over the budget {max_vertices}"
        )
    G = build_graph(q, gg, nu, max_vertices)
    Ip = G.matrix((1, r, 0, 1))
    Wp = G.matrix((1, 0, 0, -1))  # sqrt(-1) W is the same projective class
    d1 = distance(G, G.identity, Ip)
    d2 = distance(G, G.identity, Wp)
    n = G.n
    lq = math.log(n, q)
    checks = {"component_is_PSL2": n == orders["PSL2"], "at_least_4deg_r": max(d1, d2) >= 4 * r.deg}
    return LowerBoundReport(
        q, str(gg), variant, n, diameter(G), lq, 4 * lq / 3, 2 * lq, {"I->I'": d1, "I->W'": d2}, checks
    )


__all__ = [
    "PROFILES",
    "LowerBoundReport",
    "find_suitable_g",
    "lower_bound_experiment",
    "norm_witnesses",
    "profile_conditions",
]
