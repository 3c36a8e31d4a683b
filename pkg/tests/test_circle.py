import pytest
from hypothesis import given, settings, strategies as st

from ffcircle.acceptance import _system
from ffcircle.circle import (
    BRANCHES,
    CVector,
    MorgensternForm,
    SystemParams,
    beta_of_c,
    exp_sum_closed,
    exp_sum_direct,
    exp_sum_direct_table,
    exp_sum_naive,
    osc_branch,
    osc_integral_closed,
    osc_integral_numeric,
    osc_integral_zero,
)
from ffcircle.cyclo import Cyclo
from ffcircle.ffcore import GF, Poly, iter_monic_upto

from strategies import monic_polys, polys

P = lambda s: Poly.parse(3, s)  # noqa: E731
SYS = _system("t+1", (1, 0, 0, 0), "t")  # f = t^2+t+1, k = t


def cvec(max_deg):
    return st.tuples(*[polys(3, max_deg)] * 4)


# parameters -----------------------------------------------------------------

def test_form_requires_nonsquare():
    with pytest.raises(ValueError):
        MorgensternForm.make(3, 1)
    assert MorgensternForm.make(5).nu in (2, 3)


def test_system_params_derived():
    d = SYS.describe()
    assert (d["f"], d["g"], d["k"], d["R"], d["Q"], d["admissible"]) == ("t^2+t+1", "t+1", "t", 1, 2, True)
    with pytest.raises(ValueError):
        SystemParams.make(3, "t^2+t", "t", (1, 0, 0, 0))  # g does not divide f - F(lambda)
    with pytest.raises(ValueError):
        SystemParams.make(3, "t", 0)


def test_obstructed_system_not_admissible():
    p = SystemParams.make(3, "t^2+t", "t", nu=-1)
    assert not p.admissible
    with pytest.raises(ValueError):
        exp_sum_closed(p, P("1"), (0, 0, 0, 0))


def test_dual_form():
    form = SYS.form
    # F*(c) = sum c_i^2 / eta_i
    num, den = form.dual(tuple(Poly.const(form.F, x) for x in (1, 0, 0, 0)))
    assert (str(num), str(den)) == ("1", "1")
    num, den = form.dual(tuple(Poly.const(form.F, x) for x in (0, 0, 1, 0)))
    assert den == P("t+2")
    assert form.dual_norm_exp(tuple(Poly.const(form.F, x) for x in (0, 0, 1, 0))) == -1


def test_cvector():
    c = CVector.make(GF.get(3), ("t", 1, 0, "t^2"))
    assert c.deg == 2 and c.kappa_exp(P("t+1")) == 1
    assert CVector.make(GF.get(3), (0, 0, 0, 0)).kappa_exp(P("t")) is None


def test_beta_of_c():
    assert beta_of_c((2, 0, 0, 0), SYS) == P("1")
    assert beta_of_c(("t", 0, 0, 0), SYS) == P("1")  # t = 2 mod t+1
    assert beta_of_c((0, 1, 0, 0), SYS) is None
    assert beta_of_c((0, 0, 0, 0), SYS) == P("0")


# exponential sums -----------------------------------------------------------

def test_exp_sum_trivial_modulus():
    assert exp_sum_direct(SystemParams.make(3, "t", 1, nu=-1), P("1"), (0, 0, 0, 0)) == Cyclo.one(3)
    # r = 1, c = 0 gives |g|^4
    assert exp_sum_direct(SYS, P("1"), (0, 0, 0, 0)) == Cyclo.rational(3, 81)


@pytest.mark.parametrize("r", ["1", "t", "t+1", "t^2"])
@pytest.mark.parametrize("c", [(0, 0, 0, 0), (1, 0, 0, 0), ("t", 1, 0, 0)])
def test_exp_sum_frozen(r, c):
    frozen = {
        ("1", (0, 0, 0, 0)): 81, ("t", (0, 0, 0, 0)): -729, ("t+1", (1, 0, 0, 0)): 1262.6650387177117j,
        ("t^2", (1, 0, 0, 0)): 39366, ("t", (1, 0, 0, 0)): 364.5 + 631.3325193588558j, ("1", (1, 0, 0, 0)): -40.5 - 70.14805770653953j,
    }
    got = complex(exp_sum_direct(SYS, P(r), c))
    assert got == pytest.approx(frozen.get((r, c), 0), abs=1e-6)


@pytest.mark.parametrize("r", ["1", "t", "t+1", "t+2"])
@pytest.mark.parametrize("c", [(0, 0, 0, 0), (1, 0, 0, 0), (2, 1, 0, 1), ("t", 0, 1, 0)])
def test_exp_sum_naive_agrees(r, c):
    assert exp_sum_naive(SYS, P(r), c) == exp_sum_direct(SYS, P(r), c)


@settings(max_examples=30)
@given(monic_polys(3, 2, 0), cvec(2))
def test_exp_sum_closed_matches_direct(r, c):
    assert exp_sum_closed(SYS, r, c) == exp_sum_direct(SYS, r, c)


def test_exp_sum_table_matches_pointwise():
    vals = [P("0"), P("1"), P("t")]
    tab = exp_sum_direct_table(SYS, P("t"), vals)
    for idx in [(0, 0, 0, 0), (1, 0, 0, 0), (2, 1, 0, 1), (1, 1, 2, 2)]:
        c = tuple(vals[i] for i in idx)
        assert Cyclo.from_counts(3, tab[idx]) == exp_sum_direct(SYS, P("t"), c)


def test_exp_sum_rejects_non_monic():
    with pytest.raises(ValueError):
        exp_sum_direct(SYS, P("2t"), (0, 0, 0, 0))


# oscillatory integrals ------------------------------------------------------

def test_osc_zero_values():
    assert [osc_integral_zero(SYS, P(r)) for r in ["1", "t", "t+1", "t^2"]] == [
        Cyclo.rational(3, x) for x in (729, 243, 243, 81)
    ]


def test_osc_branches():
    assert osc_branch(SYS, P("1"), (0, 0, 0, 0)) == "kappa_small"
    assert osc_branch(SYS, P("1"), (1, 0, 0, 0)) == "window_zero"
    assert osc_branch(SYS, P("t"), ("t^2", 0, 0, 0)) == "kappa_large"
    assert set(BRANCHES) >= {"kloosterman", "dominant_34"}


@pytest.mark.parametrize("r", ["1", "t", "t^2+1"])
@pytest.mark.parametrize("c", [(0, 0, 0, 0), (1, 0, 0, 0), (0, 0, 1, 1), (2, 1, 2, 0), ("t", 0, 0, 1)])
def test_osc_closed_matches_numeric(r, c):
    assert osc_integral_closed(SYS, P(r), c) == osc_integral_numeric(SYS, P(r), c)


def test_osc_r_too_large():
    with pytest.raises(ValueError):
        osc_integral_closed(SYS, P("t^3"), (0, 0, 0, 0))


def test_osc_kloosterman_branch_deg2_modulus():
    p = _system("t^2+1", (1, 0, 0, 0), "t^5+t")
    hit = 0
    for r in iter_monic_upto(p.F, p.Q):
        for c in [(1, 0, 0, 0), (0, 1, 1, 0), (1, 1, 1, 1)]:
            val, branch = osc_integral_closed(p, r, c, return_branch=True)
            if branch == "kloosterman":
                hit += 1
                assert val == osc_integral_numeric(p, r, c)
    assert hit
