from fractions import Fraction

import pytest

from ffcircle.acceptance import _system, tail_completion
from ffcircle.circle import SystemParams
from ffcircle.circle.densities import (
    local_density,
    representation_count,
    singular_series_product,
    singular_series_sum,
)
from ffcircle.ffcore import Poly

import oracles

P = lambda s: Poly.parse(3, s)  # noqa: E731
SYS = _system("t+1", (1, 0, 0, 0), "t")
FLAT = SystemParams.make(3, "t", 1, nu=-1)


@pytest.mark.parametrize(
    "p,w,e,n",
    [(SYS, "t", 2, 648), (SYS, "t+2", 2, 81), (SYS, "t^2+1", 1, 720), (FLAT, "t", 2, 864), (FLAT, "t+1", 1, 24)],
)
def test_representation_count_frozen(p, w, e, n):
    assert representation_count(p, P(w), e) == n


@pytest.mark.parametrize("p", [SYS, FLAT])
@pytest.mark.parametrize("w,e", [("t", 1), ("t", 2), ("t+1", 1), ("t+1", 2), ("t^2+1", 1)])
def test_representation_count_matches_enumeration(p, w, e):
    W = P(w)
    v = 1 if (p.g.deg and W == p.g) else 0
    mod = W**e
    want = oracles.rep_count_q3(list(p.f.c), list(mod.c), [list(x.c) for x in p.lam], list((W**v).c))
    assert representation_count(p, W, e) == want


def test_good_prime_density():
    # w prime to 2 f Delta g: sigma_w = 1 - |w|^-2
    for w in ["t^2+1", "t^2+t+2"]:
        ld = local_density(FLAT, P(w))
        assert ld.stable_k == 1
        assert ld.sigma == 1 - Fraction(1, 3 ** (2 * P(w).deg))


def test_bad_prime_stabilizes():
    ld = local_density(SYS, P("t+2"))
    assert ld.values == [Fraction(1, 3), Fraction(1, 9), Fraction(4, 27), Fraction(4, 27)]
    assert ld.stable_k == 3 and ld.sigma == Fraction(4, 27)
    assert local_density(FLAT, P("t")).sigma == Fraction(32, 27)


def test_singular_product_frozen():
    assert singular_series_product(FLAT, 2).value == Fraction(524288000, 387420489)


def test_singular_sum_methods_agree():
    assert singular_series_sum(SYS, 2) == singular_series_sum(SYS, 2, method="direct")


def test_tail_completion():
    # f = t: bad primes are t and t-1; the full good-prime product is (1 - 1/q) / head
    tc = tail_completion(FLAT, 3)
    assert tc is not None and 0 < tc < 1
    assert tail_completion(_system("t+1", (1, 0, 0, 0), "t^3+2"), 1) is None
