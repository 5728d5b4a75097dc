"""End-to-end run: word -> monomial algebra -> commutator Lie algebra ->
groupoid algebra -> q-dimension estimates, with CSV/JSON/SVG output.

Every number in ``summary.json`` sits next to the operation and parameters
that produced it.  Output is deterministic: no timestamps, sorted keys.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

import mpmath

from . import groupoid as gpd
from . import liecomm, qdim
from .linalg import DEFAULT_PRIME, Field
from .monomial import MonomialAlgebra, NotNilpotent
from .regularize import CSV_VERSION, GrowthSeries, preceq_witness
from .svgplot import line_chart
from .words import factor_language, sigma_reduce, word_from_spec


class ConfigError(ValueError):
    """Invalid pipeline configuration (exit code 1)."""


class StageError(RuntimeError):
    """A pipeline stage failed (exit code 2)."""

    def __init__(self, stage: str, cause: Exception, hint: str = "raise L or N"):
        self.stage, self.cause, self.hint = stage, cause, hint
        super().__init__(f"stage {stage!r} failed: {cause} (hint: {hint})")


@dataclass
class PipelineConfig:
    source: str = "fibonacci"
    sigma: bool = False
    N: int = 12  # monomial / Lie horizon
    L: int = 10_000  # scanned prefix length
    field: str = "QQ"
    prime: int = DEFAULT_PRIME
    center_max: int = 8
    groupoid_N: int = 10
    groupoid_inject_max: int = 8
    groupoid_center_max: int = 6
    groupoid_C_max: int = 16
    budget: int = 200_000
    qdim_level: int = 2
    qdim_sigma: float = 0.5
    out: str = "liegrowth-out"
    plots: bool = True

    # config-file section for every key
    SECTIONS = {
        "words": ("source", "sigma", "N", "L"),
        "monomial": ("center_max",),
        "lie": ("field", "prime"),
        "groupoid": ("groupoid_N", "groupoid_inject_max", "groupoid_center_max",
                     "groupoid_C_max", "budget"),
        "qdim": ("qdim_level", "qdim_sigma"),
        "output": ("out", "plots"),
    }

    def validate(self):
        if self.N < 3:
            raise ConfigError("N must be at least 3")
        if self.L < self.N:
            raise ConfigError(f"prefix length L={self.L} must be at least N={self.N}")
        for name in ("budget", "groupoid_N", "center_max", "groupoid_C_max"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.center_max + 1 > self.horizon:
            raise ConfigError("center_max exceeds the language horizon")
        try:
            Field.parse(self.field)
            Field(self.prime)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.L < self.horizon:
            raise ConfigError(f"prefix length L={self.L} must be at least the horizon {self.horizon}")

    @property
    def horizon(self) -> int:
        return max(self.N + 1, self.center_max + 1, 2 * self.groupoid_N + 1,
                   self.groupoid_C_max * self.groupoid_N, 32)

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        parser = configparser.ConfigParser()
        if not parser.read(path):
            raise ConfigError(f"cannot read config file {path}")
        cfg = cls()
        # configparser lowercases keys; N and L stay reachable as n and l
        known = {k.lower(): k for keys in cls.SECTIONS.values() for k in keys}
        for section in parser.sections():
            for key, raw in parser.items(section):
                if key not in known or known[key] not in cls.SECTIONS.get(section, ()):
                    raise ConfigError(f"unknown key {section}.{key}")
                cfg.set(known[key], raw)
        return cfg

    def set(self, key: str, raw):
        types = {f.name: f.type for f in fields(self)}
        if key not in types:
            raise ConfigError(f"unknown key {key}")
        t = types[key]
        try:
            if t in ("bool", bool):
                value = raw if isinstance(raw, bool) else str(raw).lower() in ("1", "true", "yes", "on")
            elif t in ("int", int):
                value = int(float(raw))
            elif t in ("float", float):
                value = float(raw)
            else:
                value = str(raw)
        except ValueError:
            raise ConfigError(f"bad value {raw!r} for {key}") from None
        setattr(self, key, value)

    def to_json(self) -> dict:
        return asdict(self)


def _num(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, mpmath.mpf):
        return "inf" if x == mpmath.inf else float(x)
    return x


def _write_csv(path: Path, schema: str, header: list[str], rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    buf.write(f"# {CSV_VERSION} {schema}\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(v) for v in r])
    path.write_text(buf.getvalue())


def _record(op: str, params: dict, result) -> dict:
    return {"op": op, "params": params, "result": result}


def run_pipeline(config: PipelineConfig) -> dict:
    """Run every stage, write the bundle to ``config.out`` and return the summary.

    ``summary["failures"]`` lists invariant checks that did not hold.
    """
    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    field = Field.parse(config.field)
    summary: dict = {"config": config.to_json(), "stages": {}, "failures": []}
    st = summary["stages"]
    failures = summary["failures"]

    def stage(name, fn, hint="raise L or N"):
        try:
            return fn()
        except (ValueError, RuntimeError, LookupError) as exc:
            raise StageError(name, exc, hint) from exc

    # words
    def _words():
        src = word_from_spec(config.source)
        reduced = config.sigma or src.alphabet.d > 2
        if reduced:
            src = sigma_reduce(src)
        lang = factor_language(src, config.horizon, config.L)
        return src, reduced, lang

    src, reduced, lang = stage("words", _words)
    st["words"] = _record("factor_language", {"source": src.describe(), "N": lang.horizon,
                                              "L": lang.prefix_length, "sigma_reduced": reduced},
                          {"complexity": lang.complexity,
                           "unstable_lengths": [n for n, ok in sorted(lang.stable.items()) if not ok]})
    _write_csv(out / "words_complexity.csv", "complexity(n,c,stable)", ["n", "c", "stable"],
               [(n, lang.c(n), int(lang.stable[n])) for n in range(1, lang.horizon + 1)])

    # monomial algebra
    alg = MonomialAlgebra(lang, field)

    def _monomial():
        rows = []
        gamma = 0
        for n in range(1, lang.horizon + 1):
            c = lang.c(n)
            gamma += c
            rows.append((n, c, gamma, gamma + 1, c <= gamma <= n * c))
        nil = {}
        for a in lang.alphabet.letters:
            try:
                nil[a] = alg.nilpotency_degree(a)
            except NotNilpotent:
                nil[a] = None
        centers = {n: alg.center_component(n) for n in range(1, config.center_max + 1)}
        return rows, nil, centers

    mrows, nil, centers = stage("monomial", _monomial)
    bad = [r[0] for r in mrows if not r[4]]
    if bad:
        failures.append({"check": "c <= gamma_A <= n c", "n": bad})
    st["monomial"] = {
        "growth": _record("dim_component", {"N": lang.horizon},
                          {"sandwich_ok": not bad, "gamma_N": mrows[config.N - 1][2]}),
        "nilpotency": _record("nilpotency_degree", {}, nil),
        "center": _record("center_component", {"n": [1, config.center_max], "field": field.name},
                          {str(n): d for n, d in centers.items()}),
    }
    _write_csv(out / "monomial_growth.csv", "growth(n,c,gamma,gamma_unit,sandwich)",
               ["n", "c", "gamma", "gamma_with_unit", "sandwich_ok"],
               [(n, c, g, gu, int(ok)) for n, c, g, gu, ok in mrows])
    _write_csv(out / "monomial_center.csv", "center(n,dim)", ["n", "center_dim"], sorted(centers.items()))

    # commutator Lie algebra
    def _lie():
        reports = [liecomm.verify_quarter_bound(alg, n, field) for n in range(3, config.N + 1)]
        modp = {n: liecomm.commutator_dim(alg, n, Field(config.prime)) for n in range(3, config.N + 1)}
        proxy = liecomm.lie_growth_proxy(alg, config.N, field)
        return reports, modp, proxy

    reports, modp, proxy = stage("lie", _lie)
    for r in reports:
        if not r.passed:
            failures.append({"check": "quarter bound", "n": r.n})
        if modp[r.n] != r.commDim:
            failures.append({"check": f"GF({config.prime}) rank == QQ rank", "n": r.n})
    if not all(p.ok for p in proxy):
        failures.append({"check": "proxy sandwich", "n": [p.n for p in proxy if not p.ok]})
    gamma_A = GrowthSeries({n: g for n, _, g, _, _ in mrows}, name="gamma_A")
    gamma_L = GrowthSeries({p.n: p.proxy for p in proxy if p.proxy > 0}, name="lie proxy")
    # D <= 2 keeps every D*n inside the sampled range
    half = [n for n in gamma_L.points if 2 * n <= config.N]
    eq = preceq_witness(gamma_A, gamma_L, half, Dmax=2)
    eq_back = preceq_witness(gamma_L, gamma_A, half, Dmax=2)
    st["lie"] = {
        "quarter": _record("verify_quarter_bound", {"n": [3, config.N], "field": field.name},
                           [{"n": r.n, "dimA": r.dimA, "commDim": r.commDim, "bound": float(r.bound),
                             "pass": r.passed, "field": r.field, "chain_ok": r.chain_ok} for r in reports]),
        "modp": _record("commutator_dim", {"field": f"GF({config.prime})"},
                        {str(n): d for n, d in modp.items()}),
        "proxy_equivalence": _record("preceq_witness", {"Dmax": 2},
                                     {"gamma_A<=proxy": eq, "proxy<=gamma_A": eq_back}),
    }
    (out / "lie_quarter.json").write_text(
        json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True) + "\n")
    _write_csv(out / "lie_proxy.csv", "proxy(n,proxy,lower,upper)", ["n", "proxy", "lower", "upper", "ok"],
               [(p.n, p.proxy, p.lower, p.upper, int(p.ok)) for p in proxy])

    # groupoid algebra
    def _groupoid():
        inj = {n: gpd.phi_injectivity_check(lang, n, field) for n in range(0, config.groupoid_inject_max + 1)}
        comp = {n: (gpd.commutator_span_dim(lang, n, field), liecomm.commutator_dim(alg, n, field))
                for n in range(1, config.groupoid_inject_max + 1)}
        growth = gpd.filtration_growth(lang, config.groupoid_N, field, config.groupoid_C_max, config.budget)
        center = {n: gpd.truncated_center_check(growth, n, field)
                  for n in range(0, config.groupoid_center_max + 1)}
        return inj, comp, growth, center

    inj, comp, growth, gcenter = stage("groupoid", _groupoid, hint="lower groupoid_N or raise budget")
    if not all(inj.values()):
        failures.append({"check": "phi injective", "n": [n for n, ok in inj.items() if not ok]})
    if any(a != b for a, b in comp.values()):
        failures.append({"check": "commutator compatibility", "n": [n for n, (a, b) in comp.items() if a != b]})
    C = growth.sandwich_C
    st["groupoid"] = {
        "injectivity": _record("phi_injectivity_check", {"n": [0, config.groupoid_inject_max]},
                               {str(n): ok for n, ok in inj.items()}),
        "commutator_compatibility": _record(
            "commutator_span_dim", {"n": [1, config.groupoid_inject_max]},
            {str(n): {"groupoid": a, "liecomm": b} for n, (a, b) in comp.items()}),
        "growth": _record("filtration_growth", {"N": config.groupoid_N, "C_max": growth.C_max_checked},
                          {"dims": growth.dims, "sandwich_C": C}),
        "center": _record("truncated_center_check", {"n": [0, config.groupoid_center_max]},
                          {str(n): d for n, d in gcenter.items()}),
    }
    Cr = C if C is not None else growth.C_max_checked
    _write_csv(out / "groupoid_growth.csv", f"growth(n,dim,lower,upper) C={Cr}",
               ["n", "dim", "lower_bound", "upper_bound"],
               [(n, growth.dims[n],) + tuple(gpd.sandwich_bounds(lang, n, Cr)) for n in range(1, config.groupoid_N + 1)])

    # q-dimensions of the growth series
    def _qdim():
        levels = sorted({2, 3, config.qdim_level})
        return {q: qdim.dim_estimate(q, gamma_A, gamma_A.points) for q in levels}

    est = stage("qdim", _qdim, hint="increase the language horizon")
    st["qdim"] = {str(q): _record("dim_estimate", {"level": q, "series": "gamma_A", "tail": 0.5},
                                  {k: v for k, v in e.to_json().items() if k != "alpha_hat"})
                  for q, e in est.items()}
    (out / "qdim.json").write_text(json.dumps({str(q): e.to_json() for q, e in est.items()},
                                              indent=2, sort_keys=True) + "\n")

    if config.plots:
        line_chart({"c_w(n)": [(n, c) for n, c, *_ in mrows],
                    "gamma_A(n)": [(n, g) for n, _, g, *_ in mrows]},
                   out / "monomial_growth.svg", title=f"monomial algebra of {src.describe()}")
        line_chart({"Lie proxy": [(p.n, p.proxy) for p in proxy if p.proxy > 0],
                    "gamma_A": [(p.n, p.upper) for p in proxy]},
                   out / "lie_proxy.svg", title="commutator Lie algebra (graded proxy)")
        line_chart({"dim": [(n, growth.dims[n]) for n in range(1, config.groupoid_N + 1)],
                    f"upper C={Cr}": [(n, gpd.sandwich_bounds(lang, n, Cr)[1])
                                      for n in range(1, config.groupoid_N + 1)],
                    f"lower C={Cr}": [(n, float(gpd.sandwich_bounds(lang, n, Cr)[0]))
                                      for n in range(1, config.groupoid_N + 1)]},
                   out / "groupoid_growth.svg", title="groupoid algebra filtration")

    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True, default=_num) + "\n")
    return summary
