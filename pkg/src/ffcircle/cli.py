"""Command-line front end.

Exit status: 0 on success, 1 when a check fails (mismatch, failed
criterion, exhausted budget), 2 on a usage or parse error.  Every
subcommand writes a JSON manifest with its full configuration and the code
revision into ``--outdir``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from .characters import BudgetError
from .ffcore import GF, Laurent, Poly, PolyError

DEFAULT_BUDGET = int(os.environ.get("FFCIRCLE_BUDGET", 10**8))


class UsageError(Exception):
    pass


# argument parsing helpers ---------------------------------------------------

def _poly(q: int, s: str, what: str) -> Poly:
    try:
        return Poly.parse(GF.get(q), s)
    except PolyError as e:
        raise UsageError(f"--{what}: {e}") from None


def _vector(q: int, s: str, what: str, n: int = 4) -> tuple:
    parts = s.split(",")
    if len(parts) != n:
        raise UsageError(f"--{what} needs {n} comma-separated polynomials, got {len(parts)}")
    return tuple(_poly(q, x, f"{what}[{i}]") for i, x in enumerate(parts))


def _gpair(q: int, s: str, what: str) -> tuple:
    try:
        num, gpow = s.rsplit(",", 1)
        return _poly(q, num, what), int(gpow)
    except ValueError:
        raise UsageError(f"--{what} must look like NUM,GPOW (e.g. t,1)") from None


def _system(args):
    from .circle import SystemParams

    F = GF.get(args.q)
    nu = None if args.nu is None else F.from_int(args.nu)
    g = _poly(args.q, args.g, "g")
    f = _poly(args.q, args.f, "f")
    lam = _vector(args.q, args.lam, "lambda")
    try:
        return SystemParams.make(args.q, f, g, lam, nu=nu)
    except (ValueError, PolyError) as e:
        raise UsageError(str(e)) from None


def _value(z) -> dict:
    c = complex(z)
    out = {"re": c.real, "im": c.imag}
    if hasattr(z, "is_rational") and z.is_rational():
        out["exact"] = str(z.as_fraction())
    return out


def _fmt(z) -> str:
    if hasattr(z, "is_rational") and z.is_rational():
        return str(z.as_fraction())
    c = complex(z)
    return f"{c.real:.12g}{c.imag:+.12g}i"


class Run:
    """Collects printed results and writes the manifest."""

    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.results: dict = {}
        self.t0 = time.perf_counter()

    def emit(self, key: str, value, shown=None) -> None:
        self.results[key] = value
        print(f"{key}: {value if shown is None else shown}")

    def manifest(self) -> Path:
        from .tlsweep import code_revision

        config = {k: v for k, v in vars(self.args).items() if k != "func"}
        data = {
            "command": self.command,
            "config": config,
            "revision": code_revision(),
            "seconds": round(time.perf_counter() - self.t0, 6),
            "results": self.results,
        }
        out = Path(self.args.outdir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"ffcircle-{self.command.replace(' ', '-')}.manifest.json"
        path.write_text(json.dumps(data, indent=2, sort_keys=True, default=str))
        return path


# subcommands ----------------------------------------------------------------

def cmd_kloosterman(args, run: Run) -> bool:
    from .kloosterman import kl_finite, kl_infinity, kl_infinity_closed, weil_bound

    if args.kind == "finite":
        r = _poly(args.q, args.r, "r")
        m, n = _poly(args.q, args.m, "m"), _poly(args.q, args.n, "n")
        v = kl_finite(r, m, n)
        bound = weil_bound(r, m, n)
        run.emit("Kl_r(m,n)", _value(v), _fmt(v))
        run.emit("weil_bound", bound)
        ok = abs(v) <= bound + 1e-9
        run.emit("within_bound", ok)
        return ok
    num, den = _poly(args.q, args.num, "num"), _poly(args.q, args.den, "den")
    if not num or not den:
        raise UsageError("Kl_inf needs a nonzero argument")
    d = num.deg - den.deg
    alpha = Laurent.from_rational(num, den, prec=d - abs(d) - 12)
    closed = kl_infinity_closed(alpha)
    direct = kl_infinity(alpha)
    run.emit("closed", _value(closed), _fmt(closed))
    run.emit("direct", _value(direct), _fmt(direct))
    run.emit("match", closed == direct, str(closed == direct).lower())
    return closed == direct


def cmd_expsum(args, run: Run) -> bool:
    if args.grid:
        from .acceptance import criterion_1

        res = criterion_1(seed=args.seed)
        run.emit("grid", args.grid)
        for k, v in res.detail.items():
            run.emit(k, v)
        return res.passed
    from .circle import exp_sum_closed, exp_sum_direct

    p = _system(args)
    r = _poly(args.q, args.r, "r").monic()
    c = _vector(args.q, args.c, "c")
    direct = exp_sum_direct(p, r, c, budget=args.budget)
    run.emit("direct", _value(direct), _fmt(direct))
    if not p.admissible:
        run.emit("closed", None, "n/a (system not admissible)")
        return True
    closed = exp_sum_closed(p, r, c)
    run.emit("closed", _value(closed), _fmt(closed))
    run.emit("match", direct == closed, str(direct == closed).lower())
    return direct == closed


def cmd_osc(args, run: Run) -> bool:
    if args.grid:
        from .acceptance import criterion_3

        res = criterion_3(seed=args.seed)
        for k, v in res.detail.items():
            run.emit(k, v)
        return res.passed
    from .circle import osc_integral_closed, osc_integral_numeric

    p = _system(args)
    r = _poly(args.q, args.r, "r").monic()
    c = _vector(args.q, args.c, "c")
    closed, branch = osc_integral_closed(p, r, c, return_branch=True)
    numeric = osc_integral_numeric(p, r, c)
    run.emit("branch", branch)
    run.emit("closed", _value(closed), _fmt(closed))
    run.emit("numeric", _value(numeric), _fmt(numeric))
    run.emit("match", closed == numeric, str(closed == numeric).lower())
    return closed == numeric


def cmd_count(args, run: Run) -> bool:
    from .circle.delta import count_solutions, delta_reconstruct

    p = _system(args)
    n = count_solutions(p, budget=args.budget)
    run.emit("brute_force", n)
    methods = [args.s_method] if args.s_method else (["direct", "closed"] if p.admissible else ["direct"])
    ok = True
    for m in methods:
        z = delta_reconstruct(p, s_method=m, budget=args.budget)
        hit = abs(z.imag) < 1e-6 and abs(z.real - n) < 1e-6
        run.emit(f"delta[{m}]", round(z.real) if hit else [z.real, z.imag])
        ok &= hit
    run.emit("match", ok, str(ok).lower())
    return ok


def cmd_densities(args, run: Run) -> bool:
    from .circle.densities import singular_series_product, singular_series_sum

    p = _system(args)
    s = complex(singular_series_sum(p, args.T))
    prod = singular_series_product(p, args.D, k_max=args.k_max)
    pv = float(prod.value)
    run.emit("series_sum", s.real)
    run.emit("product", pv)
    for ld in prod.factors:
        if ld.sigma != 1 - Fraction(1, p.q ** (2 * ld.w.deg)):
            run.emit(f"sigma[{ld.w}]", str(ld.sigma))
    rel = abs(s.real - pv) / abs(pv) if pv else float("inf")
    run.emit("rel_err", rel)
    run.emit("unstable", [str(w) for w in prod.unstable])
    ok = rel <= args.tol
    run.emit("within_tol", ok, str(ok).lower())
    return ok


# graphs

def _graph_from(args):
    from .graphs import build_graph

    q, g = args.q, args.g
    nu = None if args.nu is None or q is None else GF.get(q).from_int(args.nu)
    if g is None:
        from .graphs import read_edge_list

        path = Path(args.graph)
        if not path.exists():
            raise UsageError(f"no --g given and no graph file {path}; run 'graph build' first")
        meta, _ = read_edge_list(path)
        q, g = meta["q"], meta["g"]
        nu = meta["nu_code"]
    if q is None:
        raise UsageError("--q is required")
    return build_graph(q, _poly(q, g, "g"), nu, max_vertices=args.max_vertices)


def _named_vertex(G, name: str, r=None):
    F = G.group.F
    if name == "I":
        return G.matrix((1, 0, 0, 1))
    if name == "W":
        return G.matrix((1, 0, 0, -1))
    if name == "I'":
        if r is None:
            raise UsageError("I' needs --r")
        return G.matrix((1, _poly(G.q, r, "r"), 0, 1))
    parts = name.split(";")
    if len(parts) != 4:
        raise UsageError(f"vertex {name!r}: use I, W, I' or 'a;b;c;d'")
    return G.matrix(tuple(_poly(G.q, x, "vertex") for x in parts))


def cmd_graph(args, run: Run) -> bool:
    from .graphs import (
        determinant_flip_check,
        diameter,
        distance,
        is_connected,
        is_symmetric,
        lower_bound_experiment,
        spectral_report,
        two_coloring,
        write_edge_list,
    )

    if args.action == "lowerbound":
        if args.q is None:
            raise UsageError("--q is required")
        nu = None if args.nu is None else GF.get(args.q).from_int(args.nu)
        rep = lower_bound_experiment(args.q, args.g, args.variant, args.r, nu, max_vertices=args.max_vertices)
        for k, v in rep.to_dict().items():
            run.emit(k, v)
        return all(rep.checks.values())
    G = _graph_from(args)
    run.emit("q", G.q)
    run.emit("g", str(G.g))
    run.emit("vertices", G.n)
    if args.action == "build":
        path = Path(args.graph)
        path.parent.mkdir(parents=True, exist_ok=True)
        m = write_edge_list(G, path)
        run.emit("degree", G.degree)
        run.emit("edges", m)
        run.emit("connected", is_connected(G))
        run.emit("symmetric", is_symmetric(G))
        run.emit("bipartite", two_coloring(G) is not None)
        run.emit("determinant_flip", determinant_flip_check(G))
        run.emit("edge_list", str(path))
        return is_connected(G) and is_symmetric(G)
    if args.action == "diameter":
        run.emit("diameter", diameter(G))
        return True
    if args.action == "spectrum":
        rep = spectral_report(G)
        for k in ("k", "lambda2", "nontrivial_radius", "bound", "bipartite", "method", "residual"):
            run.emit(k, getattr(rep, k))
        run.emit("ramanujan", rep.ramanujan, str(rep.ramanujan).lower())
        return rep.ramanujan
    if args.action == "distance":
        a = _named_vertex(G, args.src, args.r)
        b = _named_vertex(G, args.dst, args.r)
        run.emit("distance", distance(G, a, b))
        return True
    raise UsageError(f"unknown graph action {args.action}")


# tls

def _tls_params(args, T: int):
    from .tlsweep import TLSParams

    try:
        return TLSParams.make(
            args.q, _poly(args.q, args.g, "g"), _poly(args.q, args.delta, "delta"), _poly(args.q, args.alpha, "alpha"),
            _gpair(args.q, args.a, "a"), _gpair(args.q, args.b, "b"), T, args.variant,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_tls(args, run: Run) -> bool:
    from .tlsweep import SweepGrid, sweep, tls_sum_full, window_identity, write_csv, write_manifest

    if args.action == "sum":
        p = _tls_params(args, args.T)
        res = tls_sum_full(p, jobs=args.jobs)
        run.emit("key", p.key())
        run.emit("value", _value(res.value), _fmt(res.value))
        run.emit("modulus", res.modulus)
        run.emit("n_terms", res.n_terms)
        run.emit("triangle_sum", res.abs_sum)
        run.emit("weil_ceiling", res.ceiling)
        ok = res.within_ceiling
        if args.window:
            w = window_identity(p)
            run.emit("window_identity", w, str(w).lower())
            ok &= w
        return ok
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
            grid = SweepGrid(**cfg)
        except (OSError, ValueError, TypeError) as e:
            raise UsageError(f"--config: {e}") from None
    else:
        grid = SweepGrid(
            q=args.q, g=args.g.split(";"), delta=args.delta.split(";"), alpha=args.alpha.split(";"),
            a=[tuple(x.rsplit(",", 1)) for x in args.a.split(";")],
            b=[tuple(x.rsplit(",", 1)) for x in args.b.split(";")],
            variants=args.variant.split(";"), T_max=args.T,
        )
    try:
        res = sweep(grid, jobs=args.jobs, seed=args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = Path(args.csv) if args.csv else out / "tls_sweep.csv"
    write_csv(res.records, csv_path)
    write_manifest(res, csv_path.with_suffix(".manifest.json"), {"seed": args.seed})
    run.emit("records", len(res.records))
    run.emit("csv", str(csv_path))
    for f in res.fits:
        run.emit("fit", f.to_dict(), f"{f.series} slope={f.slope} status={f.status} consistent={f.consistent}")
    ceiling = all(r.within_ceiling for r in res.records)
    run.emit("ceiling_ok", ceiling)
    run.emit("recheck", res.recheck)
    return ceiling and not res.recheck["mismatches"]


def cmd_selftest(args, run: Run) -> bool:
    from .acceptance import CRITERIA

    if args.only:
        try:
            numbers = sorted({int(x) for x in args.only.split(",")})
        except ValueError:
            raise UsageError("--only takes comma-separated criterion numbers") from None
        if not set(numbers) <= set(CRITERIA):
            raise UsageError(f"criteria are numbered {min(CRITERIA)}..{max(CRITERIA)}")
    else:
        numbers = sorted(CRITERIA)
    ok = True
    for k in numbers:
        fn = CRITERIA[k]
        res = fn(jobs=args.jobs, seed=args.seed) if k == 8 else fn()
        print(res.line(), flush=True)
        run.results[f"criterion_{k}"] = {"passed": res.passed, "detail": res.detail, "seconds": res.seconds}
        ok &= res.passed
    return ok


# parser ---------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--outdir", default=".", help="directory for manifests and outputs")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized choices")
    p.add_argument("--jobs", type=int, default=1, help="parallel width for grids and sweeps")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="work budget (env FFCIRCLE_BUDGET)")


def _system_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--nu", type=int, default=None, help="the non-square nu (integer code)")
    p.add_argument("--g", default="1")
    p.add_argument("--f", required=required)
    p.add_argument("--lambda", dest="lam", default="0,0,0,0", help="lambda_1..lambda_4, comma-separated")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffcircle", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kloosterman", help="finite Kl_r(m,n) or Kl_inf(alpha)")
    _common(p)
    p.add_argument("kind", choices=["finite", "infinite"])
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--r", default="t")
    p.add_argument("--m", default="1")
    p.add_argument("--n", default="1")
    p.add_argument("--num", default="1", help="Kl_inf argument numerator")
    p.add_argument("--den", default="t^2", help="Kl_inf argument denominator")
    p.set_defaults(func=cmd_kloosterman)

    p = sub.add_parser("expsum", help="S_{g,r}(c), direct against closed")
    _common(p)
    _system_args(p, required=False)
    p.add_argument("--r", default="1")
    p.add_argument("--c", default="0,0,0,0")
    p.add_argument("--grid", choices=["small"], help="run the full equality grid")
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("osc", help="I_{g,r}(c), closed against numeric")
    _common(p)
    _system_args(p, required=False)
    p.add_argument("--r", default="1")
    p.add_argument("--c", default="0,0,0,0")
    p.add_argument("--grid", choices=["branches"], help="run the branch-coverage grid")
    p.set_defaults(func=cmd_osc)

    p = sub.add_parser("count", help="brute-force count against the delta expansion")
    _common(p)
    _system_args(p)
    p.add_argument("--s-method", choices=["direct", "closed"], default=None)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("densities", help="singular series as a sum and as a product")
    _common(p)
    _system_args(p)
    p.add_argument("--T", type=int, default=4, help="sum over deg r <= T")
    p.add_argument("--D", type=int, default=3, help="product over deg w <= D")
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(func=cmd_densities)

    p = sub.add_parser("graph", help="Morgenstern graphs")
    _common(p)
    p.add_argument("action", choices=["build", "diameter", "spectrum", "distance", "lowerbound"])
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--g", default=None)
    p.add_argument("--nu", type=int, default=None)
    p.add_argument("--graph", default="ffcircle-graph.edges", help="edge-list file written by build")
    p.add_argument("--from", dest="src", default="I")
    p.add_argument("--to", dest="dst", default="W")
    p.add_argument("--r", default=None)
    p.add_argument("--variant", choices=["bipartite", "non_bipartite"], default="bipartite")
    p.add_argument("--max-vertices", type=int, default=None)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("tls", help="twisted Linnik-Selberg sums")
    _common(p)
    p.add_argument("action", choices=["sum", "sweep"])
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--g", default="t")
    p.add_argument("--delta", default="1")
    p.add_argument("--alpha", default="0")
    p.add_argument("--a", default="1,0", help="NUM,GPOW for a = NUM / g^GPOW")
    p.add_argument("--b", default="1,0")
    p.add_argument("--variant", default="finite")
    p.add_argument("--T", type=int, default=3, help="degree (sum) or T_max (sweep)")
    p.add_argument("--window", action="store_true", help="also check the window identity")
    p.add_argument("--config", help="JSON grid for sweep")
    p.add_argument("--csv", help="CSV output (appended)")
    p.set_defaults(func=cmd_tls)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    _common(p)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "max_vertices", 0) is None:
        from .graphs.cayley import DEFAULT_MAX_VERTICES

        args.max_vertices = DEFAULT_MAX_VERTICES
    if args.command in ("expsum", "osc") and not args.grid and args.f is None:
        print("ffcircle: error: --f is required unless --grid is given", file=sys.stderr)
        return 2
    run = Run(args, args.command if not hasattr(args, "action") else f"{args.command} {args.action}")
    try:
        ok = args.func(args, run)
    except UsageError as e:
        print(f"ffcircle: error: {e}", file=sys.stderr)
        return 2
    except BudgetError as e:
        print(f"ffcircle: budget exceeded: {e}", file=sys.stderr)
        run.results["error"] = str(e)
        run.manifest()
        return 1
    run.results["ok"] = bool(ok)
    path = run.manifest()
    print(f"manifest: {path}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
