"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from ffcircle.ffcore import GF, Poly

FIELDS = (3, 5, 9)


def polys(q: int, max_deg: int = 5, nonzero: bool = False, monic: bool = False):
    F = GF.get(q)

    def build(coeffs):
        p = Poly(F, coeffs)
        if monic and p:
            p = p.monic()
        return p

    s = st.lists(st.integers(0, q - 1), min_size=0, max_size=max_deg + 1).map(build)
    if nonzero:
        s = s.filter(bool)
    return s


def monic_polys(q: int, max_deg: int = 4, min_deg: int = 0):
    F = GF.get(q)
    return st.integers(min_deg, max_deg).flatmap(
        lambda d: st.lists(st.integers(0, q - 1), min_size=d, max_size=d).map(lambda c: Poly(F, list(c) + [1]))
    )
