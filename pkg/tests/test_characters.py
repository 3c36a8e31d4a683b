import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ffcircle.characters import (
    dissect,
    dissection_membership,
    e_q,
    e_q_exp,
    field_gauss_sum,
    gauss_factor,
    gauss_tau,
    kubota_integral,
    kubota_integral_closed,
    kubota_sum,
    kubota_sum_closed,
    psi,
    psi_r,
    psi_r_exact,
    quadratic_integral,
)
from ffcircle.cyclo import Cyclo, cyclo_sum
from ffcircle.ffcore import GF, Laurent, Poly, iter_monic, iter_polys

import oracles
from strategies import monic_polys, polys

W3 = cmath.exp(2j * cmath.pi / 3)
P3 = lambda s: Poly.parse(3, s)  # noqa: E731


# cyclotomic arithmetic ------------------------------------------------------

def test_cyclo_normal_form():
    z = Cyclo.zeta(3)
    assert z + z * z == Cyclo.rational(3, -1)
    assert z * z * z == Cyclo.one(3)
    assert z.conj() == z * z
    assert (z * Fraction(1, 2)).abs2() == Cyclo.rational(3, Fraction(1, 4))
    assert Cyclo.zero(3).is_zero()
    assert cyclo_sum(5, [Cyclo.zeta(5, k) for k in range(5)]).is_zero()


@given(st.lists(st.integers(-5, 5), min_size=5, max_size=5), st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_cyclo_matches_complex(a, b):
    x, y = Cyclo(5, a), Cyclo(5, b)
    assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-9
    assert abs(complex(x + y) - (complex(x) + complex(y))) < 1e-9
    assert (x - y == Cyclo.zero(5)) == (abs(complex(x) - complex(y)) < 1e-9)


def test_cyclo_json_roundtrip():
    z = Cyclo.zeta(3) * Fraction(2, 7) + 1
    assert Cyclo.from_json(z.to_json()) == z


# additive characters --------------------------------------------------------

def test_e_q_examples():
    assert e_q(3, 0) == pytest.approx(1)
    assert e_q(3, 1) == pytest.approx(W3)
    assert e_q_exp(GF.get(9), 3) == 0  # tr(u) = 0


def test_psi_examples():
    F = GF.get(3)
    assert psi(Laurent.from_poly(P3("t^2+2"))) == pytest.approx(1)
    assert psi(Laurent(F, {-1: 1})) == pytest.approx(W3)
    assert psi(Laurent(F, {-2: 1})) == pytest.approx(1)
    assert psi_r(P3("1"), P3("t")) == pytest.approx(W3)
    assert psi_r(P3("t+2"), P3("t^2")) == pytest.approx(W3)
    assert psi_r(P3("t^2"), P3("t^2")) == pytest.approx(1)


@given(monic_polys(3, 4, 1), polys(3, 6))
def test_psi_r_matches_oracle(r, x):
    assert abs(complex(psi_r_exact(x, r)) - oracles.psi_mod(list(x.c), list(r.c), 3)) < 1e-9


@given(monic_polys(3, 3, 1), polys(3, 3), polys(3, 3))
def test_psi_r_additive(r, x, y):
    assert psi_r_exact(x + y, r) == psi_r_exact(x, r) * psi_r_exact(y, r)


# Gauss sums -----------------------------------------------------------------

def test_gauss_tau_examples():
    assert gauss_tau(P3("1")) == Cyclo.one(3)
    assert complex(gauss_tau(P3("t"))) == pytest.approx(1j * math.sqrt(3))


@pytest.mark.parametrize("q,d", [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2)])
def test_gauss_tau_oracle_and_modulus(q, d):
    for r in iter_monic(q, d):
        tau = complex(gauss_tau(r))
        assert abs(tau - oracles.gauss(list(r.c), q)) < 1e-9
        if all(e == 1 for _, e in __import__("ffcircle").ffcore.factor(r)):
            assert abs(abs(tau) - r.norm() ** 0.5) < 1e-9


def test_gauss_factor_cases():
    F = GF.get(3)
    assert gauss_factor(Laurent(F, {2: 1})) == Cyclo.rational(3, Fraction(1, 3))
    assert gauss_factor(Laurent(F, {0: 2})) == Cyclo.one(3)
    assert gauss_factor(Laurent(F, {-3: 1})) == Cyclo.one(3)
    assert complex(gauss_factor(Laurent(F, {1: 1}))) == pytest.approx(1j / math.sqrt(3))
    with pytest.raises(ValueError):
        gauss_factor(Laurent(F, {}))


@pytest.mark.parametrize("q", [3, 5, 9])
def test_field_gauss_sum_modulus(q):
    for a in range(1, q):
        assert abs(abs(complex(field_gauss_sum(q, a))) - math.sqrt(q)) < 1e-9


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("j", range(-3, 4))
def test_quadratic_integral_is_gauss_factor(q, j):
    F = GF.get(q)
    for c in (1, F.first_nonsquare()):
        f = Laurent(F, {j: c})
        assert abs(complex(quadratic_integral(f)) - complex(gauss_factor(f))) < 1e-9
        assert quadratic_integral(f, depth_extra=1) == quadratic_integral(f)


# Kubota ---------------------------------------------------------------------

def test_kubota_examples():
    F = GF.get(3)
    assert kubota_sum(Laurent(F, {-2: 1}), 1) == Cyclo.rational(3, 3)
    assert kubota_sum(Laurent(F, {-1: 1}), 1).is_zero()
    assert kubota_integral(Laurent(F, {1: 1}), 0).is_zero()
    assert kubota_integral(Laurent(F, {}), 0) == Cyclo.one(3)


@pytest.mark.parametrize("q", [3, 5])
def test_kubota_closed_forms_exhaustive(q):
    F = GF.get(q)
    for c in range(1, q):
        for j in range(-8, 4):
            g = Laurent(F, {j: c})
            for N in range(5):
                assert kubota_sum(g, N) == kubota_sum_closed(g, N)
            for Y in range(-3, 4):
                assert kubota_integral(g, Y) == kubota_integral_closed(g, Y)


@given(polys(3, 3), monic_polys(3, 3, 1), st.integers(0, 3))
def test_kubota_sum_rational_gamma(num, den, N):
    g = Laurent.from_rational(num, den, prec=-12) if num else Laurent(GF.get(3), {})
    assert kubota_sum(g, N) == kubota_sum_closed(g, N)


# dissection -----------------------------------------------------------------

def test_dissection_ball_count():
    assert len(dissect(3, 1)) == 7


@pytest.mark.parametrize("Q", [1, 2, 3])
def test_dissection_is_disjoint_cover(Q):
    counts = dissection_membership(3, Q)
    assert (counts == 1).all()
    assert sum(b.volume() for b in dissect(3, Q)) == 1


def test_dissection_membership_deeper():
    assert (dissection_membership(3, 2, depth=5) == 1).all()
