"""Twisted Linnik-Selberg sums over F_q[t] and growth sweeps in T.

    TLS(T) = sum_{r monic, deg r = T, (g, r) = 1, delta | r} psi_{g^2}(alpha / r) Kl_r(a, b)

optionally with each term multiplied by Kl_inf(psi, a b / r^2).  The arguments
a, b live in F_q[t, 1/g] and are written num / g^gpow.  Values are exact
elements of Q(zeta_p); sweeps persist them as CSV rows plus a JSON manifest.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import random
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .characters import BudgetError, psi_r_exp
from .cyclo import Cyclo
from .ffcore import GF, Laurent, Poly, gcd_monic, inv_mod, iter_monic
from .kloosterman import kl_finite, kl_infinity_closed, weil_bound

VARIANTS = ("finite", "with_infinity")
CSV_COLUMNS = (
    "q", "g", "delta", "alpha", "a_num", "a_gpow", "b_num", "b_gpow",
    "variant", "T", "re", "im", "modulus", "n_terms", "seconds",
)
DEFAULT_BUDGET = int(os.environ.get("FFCIRCLE_TLS_BUDGET", 10**7))


def code_revision() -> str:
    """Short git revision of the source tree, or the package version outside git."""
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return f"ffcircle-{__version__}"


def _poly(F: GF, x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, int):
        return Poly.const(F, F.from_int(x))
    return Poly.parse(F, str(x))


@dataclass(frozen=True)
class TLSParams:
    q: int
    g: Poly
    delta: Poly
    alpha: Poly
    a_num: Poly
    a_gpow: int
    b_num: Poly
    b_gpow: int
    T: int
    variant: str = "finite"

    @classmethod
    def make(cls, q, g, delta=1, alpha=0, a=(1, 0), b=(1, 0), T=0, variant="finite") -> "TLSParams":
        F = GF.get(q)
        return cls(
            q, _poly(F, g).monic(), _poly(F, delta).monic(), _poly(F, alpha),
            _poly(F, a[0]), int(a[1]), _poly(F, b[0]), int(b[1]), int(T), variant,
        )

    def __post_init__(self):
        if not self.g:
            raise ValueError("g must be nonzero")
        if not self.delta:
            raise ValueError("delta must be nonzero")
        if gcd_monic(self.delta, self.g).deg > 0:
            raise ValueError("delta must be coprime to g")
        if not self.a_num or not self.b_num:
            raise ValueError("a and b must be nonzero")
        if self.a_gpow < 0 or self.b_gpow < 0 or self.T < 0:
            raise ValueError("powers of g and T must be non-negative")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")

    @property
    def F(self) -> GF:
        return self.g.F

    def with_T(self, T: int) -> "TLSParams":
        return TLSParams(self.q, self.g, self.delta, self.alpha, self.a_num, self.a_gpow,
                         self.b_num, self.b_gpow, T, self.variant)

    def row(self) -> dict:
        return {
            "q": self.q, "g": str(self.g), "delta": str(self.delta), "alpha": str(self.alpha),
            "a_num": str(self.a_num), "a_gpow": self.a_gpow, "b_num": str(self.b_num),
            "b_gpow": self.b_gpow, "variant": self.variant, "T": self.T,
        }

    def key(self) -> str:
        """Content address: sha256 of the canonical parameter row."""
        blob = json.dumps(self.row(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    @classmethod
    def from_row(cls, row: dict) -> "TLSParams":
        return cls.make(
            int(row["q"]), row["g"], row["delta"], row["alpha"],
            (row["a_num"], row["a_gpow"]), (row["b_num"], row["b_gpow"]), row["T"], row["variant"],
        )


# single terms ---------------------------------------------------------------

def _rational_laurent(num: Poly, den: Poly) -> Laurent:
    d = num.deg - den.deg
    return Laurent.from_rational(num, den, prec=d - abs(d) - 12)


@dataclass
class TermData:
    value: Cyclo
    bound: float  # Weil bound times |Kl_inf| when present


def reduced_term(F: GF, g: Poly, alpha: Poly, a: tuple, b: tuple, r: Poly, with_infinity: bool) -> TermData | None:
    """psi_{g^2}(alpha / r) Kl_r(a, b) [Kl_inf(a b / r^2)] for one monic r.

    ``a`` and ``b`` are (num, den) pairs.  Returns None when a denominator is
    not invertible modulo r, so the term is undefined.
    """
    for _, den in (a, b):
        if r.deg > 0 and gcd_monic(den, r).deg > 0:
            return None
    g2 = g * g
    if g2.deg > 0:
        phase = Cyclo.zeta(F.p, psi_r_exp((alpha * inv_mod(r, g2)) % g2, g2))
    else:
        phase = Cyclo.one(F.p)
    val = phase * kl_finite(r, a, b)
    bound = weil_bound(r, a, b)
    if with_infinity:
        num = a[0] * b[0]
        den = a[1] * b[1] * r * r
        k_inf = kl_infinity_closed(_rational_laurent(num, den))
        val = val * k_inf
        bound *= abs(k_inf)
    return TermData(val, bound)


def moduli(F: GF, g: Poly, delta: Poly, T: int):
    """Monic r of degree T with (g, r) = 1 and delta | r."""
    if delta.deg > T:
        return
    for s in iter_monic(F, T - delta.deg):
        r = s * delta
        if g.deg == 0 or gcd_monic(r, g).deg == 0:
            yield r


@dataclass
class TLSResult:
    params: TLSParams
    value: Cyclo
    n_terms: int
    abs_sum: float  # sum of |term|, the triangle-inequality side
    ceiling: float  # n_terms times the largest per-term bound
    seconds: float

    @property
    def modulus(self) -> float:
        return abs(self.value)

    @property
    def within_ceiling(self) -> bool:
        return self.modulus <= self.ceiling * (1 + 1e-9) + 1e-9

    @property
    def within_triangle(self) -> bool:
        return self.modulus <= self.abs_sum * (1 + 1e-9) + 1e-9


def _pairs(p: TLSParams) -> tuple[tuple, tuple]:
    return (p.a_num, p.g**p.a_gpow), (p.b_num, p.g**p.b_gpow)


def _chunk_sum(args) -> tuple[Cyclo, int, float, float]:
    F, g, alpha, a, b, rs, with_inf = args
    acc = Cyclo.zero(F.p)
    n, abs_sum, top = 0, 0.0, 0.0
    for r in rs:
        td = reduced_term(F, g, alpha, a, b, r, with_inf)
        if td is None:
            continue
        acc = acc + td.value
        n += 1
        abs_sum += abs(td.value)
        top = max(top, td.bound)
    return acc, n, abs_sum, top


def _reduce(p: int, parts) -> tuple[Cyclo, int, float, float]:
    acc, n, abs_sum, top = Cyclo.zero(p), 0, 0.0, 0.0
    for v, k, s, b in parts:
        acc = acc + v
        n += k
        abs_sum += s
        top = max(top, b)
    return acc, n, abs_sum, top


def _evaluate(F, g, delta, alpha, a, b, T, with_inf, jobs=1, budget=DEFAULT_BUDGET):
    n_r = F.q ** max(T - delta.deg, 0) if delta.deg <= T else 0
    if n_r * max(F.q**T, 1) > budget:
        raise BudgetError(f"{n_r} moduli of degree {T} exceed the budget {budget}")
    rs = list(moduli(F, g, delta, T))
    if jobs > 1 and len(rs) > 1:
        chunks = [rs[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_chunk_sum, [(F, g, alpha, a, b, c, with_inf) for c in chunks]))
        # exact reduction: Cyclo addition is associative and commutative
        return _reduce(F.p, parts)
    return _chunk_sum((F, g, alpha, a, b, rs, with_inf))


def tls_sum_full(p: TLSParams, jobs: int = 1, budget: int = DEFAULT_BUDGET) -> TLSResult:
    t0 = time.perf_counter()
    a, b = _pairs(p)
    val, n, abs_sum, top = _evaluate(
        p.F, p.g, p.delta, p.alpha, a, b, p.T, p.variant == "with_infinity", jobs, budget
    )
    return TLSResult(p, val, n, abs_sum, n * top, time.perf_counter() - t0)


def tls_sum(p: TLSParams, jobs: int = 1, budget: int = DEFAULT_BUDGET) -> complex:
    return complex(tls_sum_full(p, jobs, budget).value)


def tls_sum_exact(p: TLSParams, jobs: int = 1, budget: int = DEFAULT_BUDGET) -> Cyclo:
    return tls_sum_full(p, jobs, budget).value


def tls_sum_upto(p: TLSParams, budget: int = DEFAULT_BUDGET) -> Cyclo:
    """The cumulative window |r| <= q^T, enumerated directly over all degrees."""
    a, b = _pairs(p)
    acc = Cyclo.zero(p.F.p)
    rs = [r for T in range(p.T + 1) for r in moduli(p.F, p.g, p.delta, T)]
    if len(rs) * p.q**p.T > budget:
        raise BudgetError("cumulative window over budget")
    for r in rs:
        td = reduced_term(p.F, p.g, p.alpha, a, b, r, p.variant == "with_infinity")
        if td is not None:
            acc = acc + td.value
    return acc


def window_identity(p: TLSParams) -> bool:
    """sum over |r| <= q^T equals the sum of the exact-degree sums T' = 0..T."""
    layered = Cyclo.zero(p.F.p)
    for T in range(p.T + 1):
        layered = layered + tls_sum_exact(p.with_T(T))
    return layered == tls_sum_upto(p)


# sweeps ---------------------------------------------------------------------

@dataclass
class SweepRecord:
    key: str
    params: TLSParams
    window: str  # "exact" (|r| = q^T) or "cumulative" (|r| <= q^T)
    value: Cyclo
    n_terms: int
    abs_sum: float
    ceiling: float
    seconds: float
    revision: str

    @property
    def modulus(self) -> float:
        return abs(self.value)

    @property
    def within_ceiling(self) -> bool:
        return self.modulus <= self.ceiling * (1 + 1e-9) + 1e-9

    def csv_row(self) -> dict:
        z = complex(self.value)
        row = self.params.row()
        row["variant"] = self.params.variant if self.window == "exact" else f"{self.params.variant}_upto"
        row.update(re=repr(z.real), im=repr(z.imag), modulus=repr(self.modulus),
                   n_terms=self.n_terms, seconds=f"{self.seconds:.6f}")
        return row


@dataclass
class SlopeFit:
    series: str
    slope: float | None
    intercept: float | None
    points: int
    status: str  # "ok" or "insufficient signal"
    untwisted: bool
    consistent: bool | None  # slope <= 1.25 for the untwisted probe, else None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SweepGrid:
    q: int = 3
    g: list = field(default_factory=lambda: ["t"])
    delta: list = field(default_factory=lambda: ["1"])
    alpha: list = field(default_factory=lambda: ["0"])
    a: list = field(default_factory=lambda: [("1", 0)])
    b: list = field(default_factory=lambda: [("1", 0)])
    variants: list = field(default_factory=lambda: ["finite"])
    T_max: int = 4

    def points(self) -> list[TLSParams]:
        out = []
        for g in self.g:
            for d in self.delta:
                for al in self.alpha:
                    for a in self.a:
                        for b in self.b:
                            for v in self.variants:
                                out.append(TLSParams.make(self.q, g, d, al, tuple(a), tuple(b), 0, v))
        return out

    def to_dict(self) -> dict:
        return asdict(self)


def fit_slope(Ts, values, tol: float = 1e-12) -> tuple[float | None, float | None, int]:
    """Least-squares slope of log_q |value| against T over the nonzero values."""
    pts = [(T, v) for T, v in zip(Ts, values) if abs(v) > tol]
    if len(pts) < 3:
        return None, None, len(pts)
    x = np.array([T for T, _ in pts], dtype=float)
    y = np.array([math.log(abs(v)) for _, v in pts])
    return (*[float(c) for c in np.polyfit(x, y, 1)], len(pts))


def _series_name(p: TLSParams, window: str) -> str:
    r = p.row()
    r.pop("T")
    return json.dumps({**r, "window": window}, sort_keys=True)


def _point_records(args) -> list[SweepRecord]:
    base, T_max, revision = args
    out = []
    cumulative = Cyclo.zero(base.F.p)
    n_cum, abs_cum, top_cum, sec_cum = 0, 0.0, 0.0, 0.0
    for T in range(T_max + 1):
        p = base.with_T(T)
        res = tls_sum_full(p)
        out.append(SweepRecord(p.key(), p, "exact", res.value, res.n_terms, res.abs_sum, res.ceiling,
                               res.seconds, revision))
        cumulative = cumulative + res.value
        n_cum += res.n_terms
        abs_cum += res.abs_sum
        top_cum = max(top_cum, res.ceiling / res.n_terms if res.n_terms else 0.0)
        sec_cum += res.seconds
        out.append(SweepRecord(p.key() + "u", p, "cumulative", cumulative, n_cum, abs_cum, n_cum * top_cum,
                               sec_cum, revision))
    return out


@dataclass
class SweepResult:
    grid: SweepGrid
    records: list
    fits: list
    recheck: dict
    revision: str

    def fit_for(self, params: TLSParams, window: str = "exact") -> SlopeFit:
        name = _series_name(params, window)
        return next(f for f in self.fits if f.series == name)


def sweep(grid: SweepGrid, jobs: int = 1, seed: int = 0, recheck_fraction: float = 0.05) -> SweepResult:
    """Evaluate every grid point for T = 0..T_max, fit slopes and re-check a sample."""
    if grid.T_max < 2:
        raise ValueError("a slope fit needs T_max >= 2 (three T values)")
    revision = code_revision()
    tasks = [(p, grid.T_max, revision) for p in grid.points()]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            batches = list(ex.map(_point_records, tasks))
    else:
        batches = [_point_records(t) for t in tasks]
    records = [r for b in batches for r in b]
    fits = []
    for base, batch in zip(grid.points(), batches):
        for window in ("exact", "cumulative"):
            rows = [r for r in batch if r.window == window]
            s, c, n = fit_slope([r.params.T for r in rows], [r.modulus for r in rows])
            untwisted = not base.alpha and base.delta.deg == 0
            fits.append(SlopeFit(
                _series_name(base, window), s, c, n, "ok" if s is not None else "insufficient signal",
                untwisted, (s <= 1.25) if (untwisted and s is not None) else None,
            ))
    return SweepResult(grid, records, fits, recheck_records(records, seed, recheck_fraction), revision)


def recheck_records(records: list, seed: int = 0, fraction: float = 0.05) -> dict:
    """Re-evaluate a seeded random sample of exact-window records; values must match exactly."""
    exact = [r for r in records if r.window == "exact"]
    if not exact:
        return {"checked": 0, "mismatches": []}
    k = max(1, math.ceil(fraction * len(exact)))
    sample = random.Random(seed).sample(exact, k)
    bad = [r.key for r in sample if tls_sum_exact(r.params) != r.value]
    return {"checked": k, "mismatches": bad}


def write_csv(records: list, path) -> None:
    """Append records; the header is written only for a new file."""
    path = Path(path)
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        if new:
            w.writeheader()
        for r in records:
            w.writerow(r.csv_row())


def read_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def write_manifest(result: SweepResult, path, extra: dict | None = None) -> None:
    data = {
        "grid": result.grid.to_dict(),
        "revision": result.revision,
        "records": len(result.records),
        "keys": [r.key for r in result.records],
        "fits": [f.to_dict() for f in result.fits],
        "recheck": result.recheck,
        "ceiling_ok": all(r.within_ceiling for r in result.records),
    }
    if extra:
        data.update(extra)
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True))


__all__ = [
    "CSV_COLUMNS",
    "SlopeFit",
    "SweepGrid",
    "SweepRecord",
    "SweepResult",
    "TLSParams",
    "TLSResult",
    "VARIANTS",
    "code_revision",
    "fit_slope",
    "moduli",
    "read_csv",
    "recheck_records",
    "reduced_term",
    "sweep",
    "tls_sum",
    "tls_sum_exact",
    "tls_sum_full",
    "tls_sum_upto",
    "window_identity",
    "write_csv",
    "write_manifest",
]
