import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ffcircle.cyclo import Cyclo
from ffcircle.ffcore import GF, Laurent, Poly, iter_monic, iter_polys
from ffcircle.kloosterman import (
    b_infinity,
    b_infinity_closed,
    kl_finite,
    kl_fq,
    kl_infinity,
    kl_infinity_closed,
    quad_complete_sum,
    quad_complete_sum_closed,
    weil_bound,
    weil_check,
)

import oracles
from strategies import monic_polys, polys

P3 = lambda s: Poly.parse(3, s)  # noqa: E731


def test_kl_fq_values():
    # x + 1/x over F_3: x=1 -> 2, x=2 -> 1, so w^2 + w = -1
    assert kl_fq(3, 1) == Cyclo.rational(3, -1)
    for p in (3, 5, 7):
        for a in range(1, p):
            assert abs(complex(kl_fq(p, a)) - oracles.field_kloosterman(p, a)) < 1e-9


def test_kl_finite_examples():
    assert kl_finite(P3("1"), P3("1"), P3("1")) == Cyclo.one(3)
    assert kl_finite(P3("t"), P3("1"), P3("1")) == Cyclo.rational(3, -1)
    # m = n = 0 gives the unit count
    assert kl_finite(P3("t^2"), P3("0"), P3("0")) == Cyclo.rational(3, 6)
    assert kl_finite(P3("t^2+1"), P3("0"), P3("0")) == Cyclo.rational(3, 8)


@given(monic_polys(3, 2, 1), polys(3, 3), polys(3, 3))
def test_kl_finite_matches_oracle(r, m, n):
    got = complex(kl_finite(r, m, n))
    want = oracles.kloosterman(list(r.c), list(m.c), list(n.c), 3)
    assert abs(got - want) < 1e-9


@given(monic_polys(3, 2, 1), polys(3, 3), polys(3, 3))
def test_kl_finite_is_real_and_symmetric(r, m, n):
    k = kl_finite(r, m, n)
    assert k == k.conj()
    assert k == kl_finite(r, n, m)


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("d", [1, 2])
def test_weil_bound_exhaustive(q, d):
    for r in iter_monic(q, d):
        for m in iter_polys(q, d - 1):
            for n in iter_polys(q, d - 1):
                assert weil_check(r, m, n)


def test_weil_bound_shape():
    # squarefree, coprime arguments: 2^omega(r) |r|^(1/2)
    assert weil_bound(P3("t^2+1"), P3("1"), P3("1")) == pytest.approx(2 * 3)
    assert weil_bound(P3("t^2+t"), P3("1"), P3("1")) == pytest.approx(4 * 3)


def test_kl_finite_accepts_fractions():
    r = P3("t^2+1")
    x = kl_finite(r, (P3("1"), P3("t")), P3("1"))
    y = kl_finite(r, P3("1"), (P3("t"), P3("1")))
    # m/t with t invertible mod r is equivalent after x -> t x
    assert x == y


# archimedean integrals ------------------------------------------------------

F3 = GF.get(3)


def L(terms):
    return Laurent(F3, terms)


def test_b_infinity_table_values():
    # |x| = q^-2, alpha small: (q - 1) q^a
    assert b_infinity_closed(-2, L({-6: 1})) == Cyclo.rational(3, Fraction(2, 9))
    assert b_infinity_closed(-2, L({-3: 1})) == Cyclo.rational(3, Fraction(-1, 9))
    assert b_infinity_closed(0, L({-1: 1})).is_zero()


@pytest.mark.parametrize("a", range(-3, 3))
@pytest.mark.parametrize("j", range(-8, 5))
@pytest.mark.parametrize("c", [1, 2])
def test_b_infinity_closed_matches_integration(a, j, c):
    alpha = L({j: c})
    assert b_infinity(a, alpha) == b_infinity_closed(a, alpha)


def test_kl_infinity_examples():
    assert kl_infinity_closed(L({-2: 1})) == Cyclo.rational(3, Fraction(-1, 3))
    assert kl_infinity_closed(L({-1: 1})).is_zero()
    assert kl_infinity_closed(L({-6: 2})) == Cyclo.rational(3, Fraction(2, 27))
    # non-square leading coefficient at a >= 0
    assert kl_infinity_closed(L({2: 2})).is_zero()


@given(polys(3, 3, nonzero=True), monic_polys(3, 3, 0))
def test_kl_infinity_closed_matches_integration(num, den):
    alpha = Laurent.from_rational(num, den, prec=-14)
    assert kl_infinity(alpha) == kl_infinity_closed(alpha)


def test_kl_infinity_convention_check():
    with pytest.raises(ValueError):
        kl_infinity_closed(L({0: 1}), convention="other")
    # even a: the conventions agree; odd a: they differ by chi(2) = -1 over F_3
    even = L({4: 1, 0: 1})
    assert kl_infinity_closed(even, "literal") == kl_infinity_closed(even, "stationary")
    odd = L({2: 1, 0: 1})
    assert kl_infinity_closed(odd, "literal") == -kl_infinity_closed(odd, "stationary")
    assert kl_infinity(odd) == kl_infinity_closed(odd, "stationary")


# complete quadratic sums ----------------------------------------------------

@given(polys(3, 3), polys(3, 3), monic_polys(3, 3, 0))
def test_quad_complete_sum_closed(a, b, c):
    assert quad_complete_sum(a, b, c) == quad_complete_sum_closed(a, b, c)


def test_quad_complete_sum_examples():
    assert quad_complete_sum(P3("0"), P3("0"), P3("t^2")) == Cyclo.rational(3, 9)
    assert quad_complete_sum(P3("0"), P3("1"), P3("t")).is_zero()
    assert quad_complete_sum(P3("0"), P3("t"), P3("t^2")).is_zero()
    with pytest.raises(ValueError):
        quad_complete_sum(P3("1"), P3("1"), P3("0"))
