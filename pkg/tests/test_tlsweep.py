import itertools
import json

import pytest

from ffcircle.cyclo import Cyclo
from ffcircle.tlsweep import (
    CSV_COLUMNS,
    SweepGrid,
    TLSParams,
    fit_slope,
    moduli,
    read_csv,
    sweep,
    tls_sum,
    tls_sum_exact,
    tls_sum_full,
    tls_sum_upto,
    window_identity,
    write_csv,
    write_manifest,
)

import oracles


def oracle_tls(T, alpha, gpow_b=0):
    """g = t, delta = 1, a = 1, b = 1 / t^gpow_b, by enumeration over F_3."""
    total = 0
    for digits in itertools.product(range(3), repeat=T):
        r = list(digits) + [1]
        if T and r[0] == 0:
            continue  # (r, t) != 1
        n = [1]
        if gpow_b:
            n = oracles.inverse(oracles.pmod([0] * gpow_b + [1], r, 3), r, 3)
        phase = oracles.psi_mod(oracles.pmul(alpha, oracles.inverse(oracles.pmod(r, [0, 0, 1], 3), [0, 0, 1], 3), 3), [0, 0, 1], 3)
        total += phase * (oracles.kloosterman(r, [1], n, 3) if T else 1)
    return total


@pytest.mark.parametrize("T", [0, 1, 2, 3])
@pytest.mark.parametrize("alpha,coeffs", [("0", []), ("1", [1]), ("t+2", [2, 1])])
def test_tls_sum_matches_enumeration(T, alpha, coeffs):
    p = TLSParams.make(3, "t", 1, alpha, (1, 0), (1, 0), T)
    assert tls_sum(p) == pytest.approx(oracle_tls(T, coeffs), abs=1e-9)


def test_tls_denominator_power():
    p = TLSParams.make(3, "t", 1, 0, (1, 0), (1, 1), 2)
    assert tls_sum(p) == pytest.approx(oracle_tls(2, [], gpow_b=1), abs=1e-9)


def test_frozen_small_sum():
    res = tls_sum_full(TLSParams.make(3, "t", T=2))
    assert res.n_terms == 6
    assert res.value == Cyclo.rational(3, 19)
    assert res.within_ceiling and res.within_triangle


def test_moduli():
    from ffcircle.ffcore import Poly

    t = Poly.parse(3, "t")
    assert len(list(moduli(t.F, t, Poly.parse(3, "1"), 2))) == 6
    assert [str(r) for r in moduli(t.F, t, Poly.parse(3, "t+2"), 1)] == ["t+2"]
    assert list(moduli(t.F, t, Poly.parse(3, "t^2+1"), 1)) == []


def test_params_validation_and_key():
    p = TLSParams.make(3, "t", "t+2", "t", ("t", 1), (1, 0), 3, "with_infinity")
    assert TLSParams.from_row({k: str(v) for k, v in p.row().items()}) == p
    assert p.key() == TLSParams.make(3, "t", "t+2", "t", ("t", 1), (1, 0), 3, "with_infinity").key()
    assert p.key() != p.with_T(2).key()
    for bad in [dict(delta="t"), dict(T=-1), dict(variant="x"), dict(a=(0, 0))]:
        with pytest.raises(ValueError):
            TLSParams.make(3, "t", **bad)


@pytest.mark.parametrize("variant", ["finite", "with_infinity"])
@pytest.mark.parametrize("delta", ["1", "t+2"])
def test_window_identity(variant, delta):
    p = TLSParams.make(3, "t^2+1", delta, "t", ("t", 1), (1, 0), 3, variant)
    assert window_identity(p)


def test_parallel_matches_serial():
    p = TLSParams.make(3, "t", 1, "1", (1, 0), (1, 0), 4)
    assert tls_sum_exact(p, jobs=2) == tls_sum_exact(p)


def test_fit_slope():
    assert fit_slope([0, 1, 2], [0, 0, 5]) == (None, None, 1)
    s, c, n = fit_slope([0, 1, 2, 3], [1, 3, 9, 27])
    assert n == 4 and s == pytest.approx(1.0986122886681098)


@pytest.fixture(scope="module")
def small_sweep():
    grid = SweepGrid(q=3, g=["t"], delta=["1", "t+2"], alpha=["0"], variants=["finite", "with_infinity"], T_max=3)
    return sweep(grid, seed=3)


def test_sweep_records(small_sweep):
    res = small_sweep
    assert len(res.records) == 4 * 4 * 2
    assert res.recheck["mismatches"] == []
    assert all(r.within_ceiling for r in res.records)
    exact = [r for r in res.records if r.window == "exact"]
    assert exact[2].value == Cyclo.rational(3, 19)
    fit = res.fit_for(TLSParams.make(3, "t"))
    assert fit.untwisted and fit.status in ("ok", "insufficient signal")


def test_sweep_needs_three_points():
    with pytest.raises(ValueError):
        sweep(SweepGrid(T_max=1))


def test_csv_and_manifest(small_sweep, tmp_path):
    path = tmp_path / "out.csv"
    write_csv(small_sweep.records, path)
    write_csv(small_sweep.records[:2], path)
    rows = read_csv(path)
    assert len(rows) == len(small_sweep.records) + 2
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert {r["variant"] for r in rows} == {"finite", "finite_upto", "with_infinity", "with_infinity_upto"}
    man = tmp_path / "m.json"
    write_manifest(small_sweep, man, {"note": "x"})
    data = json.loads(man.read_text())
    assert data["records"] == len(small_sweep.records) and data["ceiling_ok"] and data["note"] == "x"
    assert data["revision"]


def test_upto_equals_cumulative_record(small_sweep):
    last = [r for r in small_sweep.records if r.window == "cumulative"][3]
    assert tls_sum_upto(last.params) == last.value
