"""Command-line interface: ``liegrowth <command> ...``.

Exit codes: 0 success, 1 validation error, 2 stage failure,
3 an invariant check came out false.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import mpmath

from . import groupoid as gpd
from . import liecomm, qdim
from . import regularize as reg
from .linalg import Field
from .monomial import MonomialAlgebra, NotNilpotent
from .pipeline import ConfigError, PipelineConfig, StageError, run_pipeline
from .words import (ConfigurationError, InsufficientPrefix, factor_language,
                    recurrence_constant, sigma_bound_check, sigma_reduce, word_from_spec)

EXIT_OK, EXIT_INVALID, EXIT_STAGE, EXIT_ASSERT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is reserved for stage failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _json_default(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, mpmath.mpf):
        return "inf" if x == mpmath.inf else float(x)
    raise TypeError(type(x).__name__)


def _emit_json(obj, out):
    out.write(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _csv(out, schema, header, rows):
    out.write(f"# {reg.CSV_VERSION} {schema}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_json_default(v) if isinstance(v, (Fraction, mpmath.mpf)) else v for v in r])


def _open_out(args):
    return open(args.output, "w", newline="") if getattr(args, "output", None) else sys.stdout


def _source(args):
    src = word_from_spec(args.source)
    if getattr(args, "sigma", False):
        src = sigma_reduce(src)
    return src


def _algebra(args, horizon):
    src = _source(args)
    if src.alphabet.d > 2:
        src = sigma_reduce(src)
    lang = factor_language(src, horizon, max(args.L, horizon))
    return lang, MonomialAlgebra(lang, Field.parse(args.field))


def _series(args) -> reg.GrowthSeries:
    if args.series:
        return reg.GrowthSeries.from_csv(args.series)
    if args.formula:
        name, _, rest = args.formula.partition(":")
        params = dict(kv.split("=", 1) for kv in rest.split(",") if kv)
        return reg.formula(name, **params)
    raise UsageError("give --series CSV or --formula NAME[:k=v,...]")


def _points(args, f: reg.GrowthSeries) -> list[int]:
    if getattr(args, "range", None) and getattr(args, "kmax", None) is not None:
        raise UsageError("--range and --kmax are exclusive")
    if getattr(args, "kmax", None) is not None:
        return reg.dyadic(args.kmax, args.kmin)
    if getattr(args, "range", None):
        lo, _, hi = args.range.partition("..")
        return list(range(int(lo), int(hi) + 1))
    if not f.values:
        raise UsageError("formula series need --range A..B or --kmax K")
    return f.points


# -- words ---------------------------------------------------------------------

def cmd_words(args, out) -> int:
    src = _source(args)
    if args.action == "prefix":
        out.write(src.prefix(args.n) + "\n")
        return EXIT_OK
    if args.action == "complexity":
        lang = factor_language(src, args.max, max(args.L, args.max))
        _csv(out, "complexity(n,c,stable)", ["n", "c", "stable"],
             [(n, lang.c(n), int(lang.is_stable(n))) for n in range(1, args.max + 1)])
        return EXIT_OK if all(lang.is_stable(n) for n in range(1, args.max + 1)) else EXIT_ASSERT
    if args.action == "recurrence":
        C = recurrence_constant(src, args.u, args.L, confirm=not args.no_confirm)
        _emit_json({"op": "recurrence_constant", "params": {"source": src.describe(), "u": args.u, "L": args.L},
                    "result": C}, out)
        return EXIT_OK
    if args.action == "sigma-bounds":
        rows = sigma_bound_check(src, args.max, args.L)
        _csv(out, "sigma_bounds(n,c,c_prime_scaled,c_prime,upper,ok)",
             ["n", "c_w", "c_wprime_scaled", "c_wprime", "upper", "ok"],
             [(r.n, r.c, r.c_prime_scaled, r.c_prime, r.upper, int(r.ok)) for r in rows])
        return EXIT_OK if all(r.ok for r in rows) else EXIT_ASSERT
    raise UsageError(args.action)


# -- growth series -----------------------------------------------------------------

def cmd_growth(args, out) -> int:
    f = _series(args)
    if args.action == "table":
        values = {}
        for n in _points(args, f):
            try:
                values[n] = f(n)
            except qdim.DomainError as exc:
                sys.stderr.write(f"skipping n={n}: {exc}\n")
        reg.GrowthSeries(values, name=f.name).to_csv(out)
        return EXIT_OK
    if args.action == "preceq":
        args.series, args.formula = args.g_series, args.g_formula
        g = _series(args)
        pts = _points(args, f)
        w = reg.preceq_witness(f, g, pts, args.cmax, args.dmax)
        _emit_json({"op": "preceq_witness", "params": {"f": f.name, "g": g.name, "Cmax": args.cmax,
                                                         "Dmax": args.dmax, "points": [pts[0], pts[-1]]},
                    "result": list(w) if w else None}, out)
        return EXIT_OK
    if args.action == "submult":
        pts = _points(args, f)
        bad = reg.check_submultiplicative(f, pts)
        _emit_json({"op": "check_submultiplicative", "params": {"f": f.name, "points": [pts[0], pts[-1]]},
                    "result": {"violations": bad, "count": len(bad)}}, out)
        return EXIT_OK if not bad else EXIT_ASSERT
    if args.action == "conditions":
        t = args.t
        if t is None:
            t, n0 = reg.select_t(f, reg.dyadic(args.kmax))
        fp = reg.f_prime(f, t)
        rep = reg.check_conditions(fp, t, args.kmax)
        _emit_json({"op": "check_conditions", "params": {"f": f.name, "t": t, "k_max": args.kmax},
                    "result": rep.summary()}, out)
        return EXIT_OK if rep.a.holds and rep.b.holds and rep.c_stabilized else EXIT_ASSERT
    raise UsageError(args.action)


# -- monomial / lie --------------------------------------------------------------

def cmd_monomial(args, out) -> int:
    lang, alg = _algebra(args, args.max + 1)
    rows, ok = [], True
    gamma = 0
    for n in range(1, args.max + 1):
        gamma += alg.dim_component(n)
        z = alg.center_component(n) if n <= args.center_max else ""
        z2 = alg.ad_kernel_intersection(n) if n <= args.center_max else ""
        ok &= z == z2
        rows.append((n, alg.dim_component(n), gamma, z, z2))
    _csv(out, "monomial(n,dim,gamma,center,ad_kernels)", ["n", "dim", "gamma", "center", "ad_kernels"], rows)
    for a in lang.alphabet.letters:
        try:
            sys.stderr.write(f"nilpotency degree of {a}: {alg.nilpotency_degree(a)}\n")
        except NotNilpotent:
            sys.stderr.write(f"nilpotency degree of {a}: none within the horizon\n")
    return EXIT_OK if ok else EXIT_ASSERT


def cmd_lie(args, out) -> int:
    _, alg = _algebra(args, args.max + 1)
    field = Field.parse(args.field)
    if args.action == "quarter":
        ok = True
        rows = []
        for n in range(3, args.max + 1):
            r = liecomm.verify_quarter_bound(alg, n, field)
            ok &= r.passed
            rows.append((n, r.dimA, r.commDim, r.bound, r.margin, "pass" if r.passed else "FAIL"))
        _csv(out, "quarter(n,dimA,commDim,bound,margin,status)",
             ["n", "dimA", "commDim", "bound", "margin", "status"], rows)
        return EXIT_OK if ok else EXIT_ASSERT
    if args.action == "proxy":
        proxy = liecomm.lie_growth_proxy(alg, args.max, field)
        _csv(out, "proxy(n,proxy,lower,upper,ok)", ["n", "proxy", "lower", "upper", "ok"],
             [(p.n, p.proxy, p.lower, p.upper, int(p.ok)) for p in proxy])
        return EXIT_OK if all(p.ok for p in proxy) else EXIT_ASSERT
    if args.action == "dims":
        _csv(out, "commutator(n,dim)", ["n", "commutator_dim"],
             [(n, liecomm.commutator_dim(alg, n, field)) for n in range(1, args.max + 1)])
        return EXIT_OK
    raise UsageError(args.action)


# -- groupoid --------------------------------------------------------------------

def cmd_groupoid(args, out) -> int:
    field = Field.parse(args.field)
    # vectorising an element of level n needs windows of width 2n + 1
    need = 2 * args.max + 1 if args.action != "growth" else max(2 * args.max + 1, args.cmax * args.max)
    src = _source(args)
    if src.alphabet.d > 2:
        src = sigma_reduce(src)
    lang = factor_language(src, need, max(args.L, need))
    if args.action == "phi":
        _emit_json({"word": args.word, "dump": gpd.Subshift(lang).phi(args.word).dump().splitlines()}, out)
        return EXIT_OK
    if args.action == "inject":
        rows = [(n, lang.c(n) if n else 1, int(gpd.phi_injectivity_check(lang, n, field)))
                for n in range(0, args.max + 1)]
        _csv(out, "injectivity(n,c,injective)", ["n", "c", "injective"], rows)
        return EXIT_OK if all(r[2] for r in rows) else EXIT_ASSERT
    if args.action == "commutators":
        alg = MonomialAlgebra(lang, field)
        rows = [(n, gpd.commutator_span_dim(lang, n, field), liecomm.commutator_dim(alg, n, field))
                for n in range(1, args.max + 1)]
        _csv(out, "commutators(n,groupoid,liecomm)", ["n", "groupoid", "liecomm"], rows)
        return EXIT_OK if all(a == b for _, a, b in rows) else EXIT_ASSERT
    growth = gpd.filtration_growth(lang, args.max, field, args.cmax, args.budget)
    if args.action == "growth":
        C = growth.sandwich_C or growth.C_max_checked
        _csv(out, f"groupoid_growth(n,dim,lower,upper) C={C}", ["n", "dim", "lower", "upper"],
             [(n, growth.dims[n]) + tuple(gpd.sandwich_bounds(lang, n, C)) for n in range(1, args.max + 1)])
        return EXIT_OK if growth.sandwich_C is not None else EXIT_ASSERT
    if args.action == "center":
        rows = [(n, gpd.truncated_center_check(growth, n, field)) for n in range(0, args.max + 1)]
        _csv(out, "groupoid_center(n,dim)", ["n", "center_dim"], rows)
        return EXIT_OK
    raise UsageError(args.action)


# -- qdim ----------------------------------------------------------------------------

def cmd_qdim(args, out) -> int:
    if args.verify:
        reps = qdim.verify_corollaries(args.level, args.sigma, args.kmax or 24)
        _emit_json([r.to_json() for r in reps], out)
        return EXIT_OK if all(r.holds for r in reps) else EXIT_ASSERT
    if args.series or args.formula:
        f = _series(args)
        pts = _points(args, f) if (args.kmax is not None or args.range) else f.points
    elif args.alpha is not None:
        # round trip on ln Phi^level_alpha itself
        q, a = args.level, args.alpha
        pts = [n for n in _points(args, reg.GrowthSeries({}, name="grid")) if n >= qdim.n_min(q)]
        f = reg.GrowthSeries({n: qdim.log_phi(q, a, n) for n in pts}, name=f"Phi^{q}_{a}", meta={"log": True})
    else:
        raise UsageError("give --series, --formula or --alpha")
    est = qdim.dim_estimate(args.level, f, pts, args.tail, args.min_samples)
    result = est.to_json()
    if args.alpha is not None:
        result["alpha"] = args.alpha
        result["max_relative_error"] = max(
            (abs(float(v) - args.alpha) / args.alpha if v != qdim.ABOVE else float("inf"))
            for n, v in est.trace.items() if est.window[0] <= n <= est.window[1])
    _emit_json({"op": "dim_estimate", "params": {"level": args.level, "series": f.name, "tail": args.tail},
                "result": result}, out)
    return EXIT_OK


def cmd_pipeline(args, out) -> int:
    cfg = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    for key in ("source", "N", "L", "field", "out", "budget", "groupoid_N", "qdim_level", "qdim_sigma"):
        v = getattr(args, key, None)
        if v is not None:
            cfg.set(key, v)
    if args.sigma:
        cfg.sigma = True
    if args.no_plots:
        cfg.plots = False
    summary = run_pipeline(cfg)
    _emit_json({"out": cfg.out, "failures": summary["failures"]}, out)
    return EXIT_OK if not summary["failures"] else EXIT_ASSERT


# -- parser ---------------------------------------------------------------------------

def _common(p, field=True, L=10_000):
    p.add_argument("--source", default="fibonacci",
                   help="library name, periodic:<block>, explicit:<text>, subst:a=..,b=..[@seed], sigma:<spec>")
    p.add_argument("--L", "--prefix-len", dest="L", type=int, default=L, help="scanned prefix length")
    p.add_argument("--sigma", action="store_true", help="apply x_i -> x y^i first")
    if field:
        p.add_argument("--field", default="QQ", help="QQ or GF(p)")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")


def _series_args(p):
    p.add_argument("--series", help="two-column CSV (n, value)")
    p.add_argument("--formula", help="n_pow_ln | power:k=2 | exp2 | phi:q=3,sigma=0.5 | between_layers:q=2")
    p.add_argument("--range", help="dense sample range A..B")
    p.add_argument("--kmax", type=int, help="dyadic grid 2^kmin..2^kmax")
    p.add_argument("--kmin", type=int, default=0)
    p.add_argument("-o", "--output")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="liegrowth", description="Growth of algebras built from uniformly recurrent words.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("words", help="prefixes, complexity, recurrence")
    ws = w.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = ws.add_parser("prefix")
    _common(p, field=False)
    p.add_argument("--n", type=int, required=True)
    p = ws.add_parser("complexity")
    _common(p, field=False)
    p.add_argument("--max", type=int, default=20)
    p = ws.add_parser("recurrence")
    _common(p, field=False)
    p.add_argument("--u", required=True)
    p.add_argument("--no-confirm", action="store_true", help="skip the 2L confirmation scan")
    p = ws.add_parser("sigma-bounds")
    _common(p, field=False)
    p.add_argument("--max", type=int, default=15)
    w.set_defaults(func=cmd_words)

    g = sub.add_parser("growth", help="growth-series calculus")
    gs = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("table", "preceq", "submult", "conditions"):
        p = gs.add_parser(name)
        _series_args(p)
        if name == "preceq":
            p.add_argument("--g-series")
            p.add_argument("--g-formula")
            p.add_argument("--cmax", type=int, default=64)
            p.add_argument("--dmax", type=int, default=64)
        if name == "conditions":
            p.add_argument("--t", type=int, help="default: select_t on the grid")
            p.set_defaults(kmax=30)
    g.set_defaults(func=cmd_growth)

    m = sub.add_parser("monomial", help="graded dimensions and centre of A_w")
    _common(m)
    m.add_argument("--max", type=int, default=10)
    m.add_argument("--center-max", type=int, default=8)
    m.set_defaults(func=cmd_monomial)

    lie = sub.add_parser("lie", help="commutator Lie algebra")
    ls = lie.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("quarter", "proxy", "dims"):
        p = ls.add_parser(name)
        _common(p)
        p.add_argument("--max", type=int, default=12)
    lie.set_defaults(func=cmd_lie)

    gr = sub.add_parser("groupoid", help="groupoid convolution algebra")
    grs = gr.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("phi", "inject", "commutators", "growth", "center"):
        p = grs.add_parser(name)
        _common(p)
        p.add_argument("--max", type=int, default={"growth": 10, "center": 6}.get(name, 8))
        p.add_argument("--cmax", type=int, default=16)
        p.add_argument("--budget", type=int, default=200_000)
        if name == "phi":
            p.add_argument("--word", required=True)
    gr.set_defaults(func=cmd_groupoid)

    q = sub.add_parser("qdim", help="q-dimension estimates and doubling or layer-gap checks")
    q.add_argument("--level", type=int, required=True)
    _series_args(q)
    q.add_argument("--alpha", type=float,
                   help="expected alpha; without a series, estimate on Phi^level_alpha itself")
    q.add_argument("--tail", type=float, default=0.5)
    q.add_argument("--min-samples", type=int, default=16)
    q.add_argument("--verify", action="store_true", help="check the doubling and layer-gap inequalities instead")
    q.add_argument("--sigma", type=float, help="sigma for the realisation check (with --verify)")
    q.set_defaults(func=cmd_qdim)

    pl = sub.add_parser("pipeline", help="end-to-end run with CSV/JSON/SVG output")
    pl.add_argument("--config", help="INI file with sections words, monomial, lie, groupoid, qdim, output")
    pl.add_argument("--source")
    pl.add_argument("--N", type=int)
    pl.add_argument("--L", "--prefix-len", dest="L", type=int)
    pl.add_argument("--field")
    pl.add_argument("--out")
    pl.add_argument("--budget", type=int)
    pl.add_argument("--groupoid-N", dest="groupoid_N", type=int)
    pl.add_argument("--qdim-level", dest="qdim_level", type=int)
    pl.add_argument("--qdim-sigma", dest="qdim_sigma", type=float)
    pl.add_argument("--sigma", action="store_true")
    pl.add_argument("--no-plots", action="store_true")
    pl.set_defaults(func=cmd_pipeline)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already reported
        return exc.code
    try:
        out = _open_out(args)
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    try:
        return args.func(args, out)
    except (ConfigError, ConfigurationError, UsageError, qdim.DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except StageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_STAGE
    except (InsufficientPrefix, reg.InsufficientSamples, gpd.BudgetExceeded) as exc:
        sys.stderr.write(f"error: {exc} (hint: raise L or the budget, or lower the horizon)\n")
        return EXIT_STAGE
    except reg.NotEvidenced as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ASSERT
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
