import itertools

import pytest
from hypothesis import given, strategies as st

from ffcircle.ffcore import (
    GF,
    Laurent,
    Poly,
    PolyError,
    PrecisionError,
    ResidueRing,
    crt,
    factor,
    gcd_monic,
    inv_mod,
    is_irreducible,
    is_squarefree,
    iter_irreducible,
    iter_monic,
    jacobi,
    m_part,
    omega,
    valuation,
    xgcd,
)

from strategies import FIELDS, monic_polys, polys

P3 = lambda s: Poly.parse(3, s)  # noqa: E731


def naive_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def mobius(n):
    out, m, k = 1, n, 2
    while k * k <= m:
        if m % k == 0:
            m //= k
            if m % k == 0:
                return 0
            out = -out
        k += 1
    return -out if m > 1 else out


# field ----------------------------------------------------------------------

def test_gf9_modulus_and_trace():
    F = GF.get(9)
    u = 3  # the code of u
    assert F.mul(u, u) == F.neg(1)  # u^2 + 1 = 0
    assert F.trace(u) == 0
    assert F.format(u) == "u"


@pytest.mark.parametrize("q", FIELDS)
def test_field_axioms_exhaustive(q):
    F = GF.get(q)
    for a in F.elements():
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, q - 1) == 1
    for a, b, c in itertools.product(F.elements(), repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("q", FIELDS)
def test_quadratic_character(q):
    F = GF.get(q)
    squares = {F.mul(x, x) for x in F.nonzero()}
    assert len(squares) == (q - 1) // 2
    for a in F.nonzero():
        assert (F.chi(a) == 1) == (a in squares)
    assert F.chi(F.first_nonsquare()) == -1


def test_bad_field_size():
    with pytest.raises(Exception):
        GF.get(6)


# polynomials ----------------------------------------------------------------

def test_norms():
    assert P3("t^2+1").norm() == 9
    assert Poly.const(3, 1).norm() == 1
    assert Poly(3).norm() == 0


def test_gcd_examples():
    assert gcd_monic(P3("t^2-1"), P3("t-1")) == P3("t+2")
    assert gcd_monic(P3("t"), P3("t-1")) == P3("1")
    assert gcd_monic(P3("2t+2"), P3("t+1")) == P3("t+1")


def test_inverse_examples():
    assert inv_mod(P3("1"), P3("t^2+t+2")) == P3("1")
    assert inv_mod(P3("t"), P3("t-1")) == P3("1")
    assert inv_mod(P3("t"), P3("t^2+1")) == P3("2t")
    with pytest.raises(Exception):
        inv_mod(P3("t"), P3("t^2"))


def test_m_part_examples():
    assert m_part(P3("t^2"), P3("t")) == P3("t^2")
    assert m_part(P3("t^2+1"), P3("t+1")) == P3("1")
    assert m_part(P3("t^2+t"), P3("t^3")) == P3("t")


def test_jacobi_examples():
    r = P3("t^2+t+2")
    assert jacobi(P3("1"), r) == 1
    assert jacobi(P3("t"), r) == -1
    assert jacobi(P3("-1"), r) == 1


def test_irreducible_examples():
    assert is_irreducible(P3("t^2+1"))
    assert not is_irreducible(P3("t^2-1"))
    assert [str(g) for g in iter_irreducible(3, 2)] == ["t^2+1", "t^2+t+2", "t^2+2t+2"]


@pytest.mark.parametrize("q,d", [(3, 1), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (9, 2)])
def test_irreducible_count_necklace(q, d):
    expected = sum(mobius(d // e) * q**e for e in range(1, d + 1) if d % e == 0) // d
    assert sum(1 for _ in iter_irreducible(q, d)) == expected


def test_irreducible_matches_root_free_brute_force():
    # degree <= 3: irreducible iff no root in F_q
    for d in (2, 3):
        for g in iter_monic(5, d):
            has_root = any(g(x) == 0 for x in GF.get(5).elements())
            assert is_irreducible(g) == (not has_root)


def test_parse_forms():
    assert Poly.parse(3, "2,1,1") == P3("t^2+t+2")
    assert P3("t^2+t+2").machine() == "2,1,1"
    assert P3("-t") == P3("2t")
    with pytest.raises(PolyError, match="column"):
        P3("t^2+*")
    with pytest.raises(PolyError):
        P3("")


@given(polys(3, 6), polys(3, 6))
def test_mul_matches_naive(a, b):
    assert (a * b).c == tuple(naive_mul(list(a.c), list(b.c), 3)) or list((a * b).c) == naive_mul(list(a.c), list(b.c), 3)


@pytest.mark.parametrize("q", FIELDS)
@given(data=st.data())
def test_divmod_and_xgcd(q, data):
    a = data.draw(polys(q, 6))
    b = data.draw(polys(q, 4, nonzero=True))
    qt, r = divmod(a, b)
    assert qt * b + r == a
    assert r.deg < b.deg or not r
    g, s, t = xgcd(a, b)
    assert s * a + t * b == g
    assert g.divides(a) and g.divides(b)


@pytest.mark.parametrize("q", FIELDS)
@given(data=st.data())
def test_format_parse_roundtrip(q, data):
    a = data.draw(polys(q, 6))
    assert Poly.parse(q, str(a)) == a
    assert Poly.parse(q, a.machine()) == a if a else True


@given(polys(5, 6, nonzero=True))
def test_factor_reconstructs(a):
    prod = Poly.const(5, a.lc)
    for w, e in factor(a):
        assert is_irreducible(w) and w.is_monic()
        prod = prod * w**e
    assert prod == a
    assert is_squarefree(a) == all(e == 1 for _, e in factor(a))
    assert omega(a) == len(factor(a))


@given(monic_polys(3, 3, 1), monic_polys(3, 3, 1), polys(3, 2), polys(3, 2))
def test_crt(m1, m2, x1, x2):
    if gcd_monic(m1, m2).deg > 0:
        return
    x = crt([x1 % m1, x2 % m2], [m1, m2])
    assert x % m1 == x1 % m1 and x % m2 == x2 % m2


@given(monic_polys(3, 3, 1), polys(3, 4, nonzero=True))
def test_jacobi_euler_criterion_for_irreducible(r, a):
    if not is_irreducible(r) or r.divides(a):
        return
    e = (r.norm() - 1) // 2
    val = a.pow_mod(e, r)
    assert val == Poly.const(3, 1 if jacobi(a, r) == 1 else 2)


@given(monic_polys(3, 4, 1), polys(3, 3, nonzero=True), polys(3, 3, nonzero=True))
def test_jacobi_multiplicative(r, a, b):
    assert jacobi(a * b, r) == jacobi(a, r) * jacobi(b, r)


def test_valuation():
    assert valuation(P3("t^3+t^2"), P3("t")) == 2
    assert valuation(P3("t+1"), P3("t")) == 0


# residue rings --------------------------------------------------------------

@pytest.mark.parametrize("M", ["t", "t^2", "t^2+1", "t^3+t", "t^2+t+2"])
def test_residue_ring_tables(M):
    R = ResidueRing.get(P3(M))
    assert R.size == 3 ** P3(M).deg
    for x in range(R.size):
        px = R.poly(x)
        assert R.elem(px) == x
        for y in (0, 1, R.size - 1):
            assert R.poly(int(R.mul(x, y))) == (px * R.poly(y)) % P3(M)
            assert R.poly(int(R.add(x, y))) == (px + R.poly(y)) % P3(M)
    units = set(int(u) for u in R.units)
    assert units == {x for x in range(R.size) if gcd_monic(R.poly(x), P3(M)).deg == 0}


def test_squares_mod_g_examples():
    R = ResidueRing.get(P3("t^2+t+2"))
    assert not R.euler_is_square(R.elem(P3("t")))
    assert R.euler_is_square(R.elem(P3("-1")))
    assert R.euler_is_square(R.elem(P3("1")))


# Laurent series -------------------------------------------------------------

@given(polys(3, 4, nonzero=True), polys(3, 3, nonzero=True))
def test_rational_expansion(num, den):
    L = Laurent.from_rational(num, den, prec=-12)
    back = L * Laurent.from_poly(den)
    assert back.agrees(Laurent.from_poly(num), down_to=-12 + den.deg + 1)


def test_laurent_precision_guard():
    L = Laurent.from_rational(P3("1"), P3("t^2+1"), prec=-6)
    assert L.coeff(-2) == 1 and L.coeff(-4) == 2
    with pytest.raises(PrecisionError):
        L.coeff(-20)


@given(st.integers(1, 2), st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_sqrt_unit(lead, tail):
    # u = 1 + (tail digits below t^0); sqrt_unit squares back
    F = GF.get(3)
    u = Laurent(F, {0: 1, **{-(i + 1): c for i, c in enumerate(tail) if c}}, prec=-5)
    s = u.sqrt_unit(prec=-5)
    assert (s * s).agrees(u, down_to=-4)
    assert s.coeff(0) == 1
