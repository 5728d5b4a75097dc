"""Sampled growth functions: the preorder f ≼ g, submultiplicativity,
the doubling regularisation f -> f' and its dyadic conditions.

Everything asymptotic ("for all n ≫ 1") is read as: there is an onset n0
among the first half of the sample points such that the predicate holds at
every sample point from n0 on.  Onsets are always reported.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import mpmath

PREC = 128  # bits used for all real-valued evaluations
EPS = mpmath.mpf("1e-9")
CSV_VERSION = "liegrowth-csv v1"


class InsufficientSamples(LookupError):
    pass


class NotEvidenced(ValueError):
    pass


class GrowthSeries:
    """n -> f(n) on a sample set, optionally backed by a formula.

    With ``func`` set, values outside ``values`` are computed on demand and
    cached; otherwise asking for an unsampled point raises
    :class:`InsufficientSamples`.
    """

    def __init__(
        self,
        values: dict[int, object] | None = None,
        name: str = "",
        func: Callable[[int], object] | None = None,
        increasing: bool = False,
        meta: dict | None = None,
    ):
        self.values = dict(values or {})
        self.name = name
        self.func = func
        self.increasing = increasing
        self.meta = dict(meta or {})
        if any(v <= 0 for v in self.values.values()):
            raise ValueError("growth series values must be positive")

    @classmethod
    def from_function(cls, func, points: Iterable[int] = (), name: str = "", **kw) -> "GrowthSeries":
        s = cls({}, name=name, func=func, **kw)
        for n in points:
            s(n)
        return s

    def __call__(self, n: int):
        try:
            return self.values[n]
        except KeyError:
            if self.func is None:
                raise InsufficientSamples(f"{self.name or 'series'} is not sampled at n={n}") from None
            v = self.values[n] = self.func(n)
            return v

    def __contains__(self, n) -> bool:
        return n in self.values or self.func is not None

    @property
    def points(self) -> list[int]:
        return sorted(self.values)

    def restrict(self, points: Iterable[int]) -> "GrowthSeries":
        return GrowthSeries({n: self(n) for n in points}, name=self.name, increasing=self.increasing)

    def to_csv(self, path, header: str = "value"):
        """Two-column CSV; ``path`` may also be an open text stream."""
        if hasattr(path, "write"):
            self._write_csv(path, header)
        else:
            with Path(path).open("w", newline="") as fh:
                self._write_csv(fh, header)

    def _write_csv(self, fh, header):
        fh.write(f"# {CSV_VERSION} series(n,{header})\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", header])
        for n in self.points:
            w.writerow([n, _fmt(self.values[n])])

    @classmethod
    def from_csv(cls, path, name: str | None = None) -> "GrowthSeries":
        path = Path(path)
        values = {}
        with path.open(newline="") as fh:
            rows = csv.reader(fh)
            for row in rows:
                if not row or row[0].startswith("#"):
                    continue
                try:
                    n = int(row[0])
                except ValueError:
                    continue  # header
                text = row[1].strip()
                values[n] = int(text) if text.lstrip("-").isdigit() else mpmath.mpf(text)
        return cls(values, name=name or path.stem)

    def __repr__(self):
        return f"GrowthSeries({self.name!r}, {len(self.values)} samples)"


def _fmt(v) -> str:
    if isinstance(v, int):
        return str(v)
    with mpmath.workprec(PREC):
        return mpmath.nstr(mpmath.mpf(v), 30)


def dyadic(k_max: int, k_min: int = 0) -> list[int]:
    return [2 ** k for k in range(k_min, k_max + 1)]


def ceil_exp(log_value: Callable[[], object]) -> int:
    """Exact ceiling of exp(L), where ``log_value()`` computes L at the working precision.

    L is re-evaluated at a precision large enough for every integer digit of
    the result to be correct.
    """
    with mpmath.workprec(PREC):
        bits = int(mpmath.ceil(log_value() / mpmath.log(2))) + 1
    with mpmath.workprec(max(PREC, bits + 64)):
        return int(mpmath.ceil(mpmath.exp(log_value())))


# -- named formulas -----------------------------------------------------------

def n_pow_ln(n: int) -> int:
    """⌈n^{ln n}⌉."""
    return ceil_exp(lambda: mpmath.log(n) ** 2)


def formula(name: str, **params) -> GrowthSeries:
    """Formula-defined series by name (used by the config file and the CLI)."""
    if name == "n_pow_ln":
        return GrowthSeries.from_function(n_pow_ln, name="ceil(n^ln n)", increasing=True)
    if name == "power":
        k = int(params.get("k", 2))
        c = int(params.get("c", 1))
        return GrowthSeries.from_function(lambda n: c * n ** k, name=f"{c}n^{k}", increasing=True)
    if name == "exp2":
        return GrowthSeries.from_function(lambda n: 2 ** n, name="2^n", increasing=True)
    if name == "constant":
        c = params.get("c", 1)
        return GrowthSeries.from_function(lambda n: c, name=f"const {c}")
    if name == "phi":
        from .qdim import phi_ceil

        q, sigma = int(params["q"]), float(params["sigma"])
        return GrowthSeries.from_function(lambda n: phi_ceil(q, sigma, n), name=f"ceil Phi^{q}_{sigma}")
    if name == "between_layers":
        from .qdim import between_layers

        q = int(params["q"])
        return GrowthSeries.from_function(lambda n: between_layers(q, n), name=f"f_{q}")
    raise ValueError(f"unknown formula {name!r}")


# -- the preorder ----------------------------------------------------------------

def preceq_witness(
    f: GrowthSeries,
    g: GrowthSeries,
    points: Iterable[int],
    Cmax: int = 64,
    Dmax: int = 64,
) -> tuple[int, int] | None:
    """Lexicographically least integers (C, D) with f(n) <= C g(D n) on ``points``.

    None means no witness inside the bounds, which is evidence and not a
    proof that f is not dominated by g.
    """
    points = list(points)
    best = None
    for D in range(1, Dmax + 1):
        limit = Cmax if best is None else best[0] - 1
        C = 1
        while C <= limit and any(f(n) > C * g(D * n) for n in points):
            C += 1
        if C <= limit:
            best = (C, D)
            if C == 1:
                break
    return best


def equivalent(f: GrowthSeries, g: GrowthSeries, points, Cmax=64, Dmax=64):
    """Witnesses for f ≼ g and g ≼ f (either may be None)."""
    return preceq_witness(f, g, points, Cmax, Dmax), preceq_witness(g, f, points, Cmax, Dmax)


def check_submultiplicative(f: GrowthSeries, points: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs (m, n), m <= n, with m + n sampled and f(m + n) > f(m) f(n)."""
    pts = sorted(points)
    have = set(pts)
    out = []
    for i, m in enumerate(pts):
        for n in pts[i:]:
            if m + n in have and f(m + n) > f(m) * f(n):
                out.append((m, n))
    return out


def check_dyadic_submultiplicative(f: GrowthSeries, points: Sequence[int]) -> list[int]:
    """Points n with f(2n) > f(n)^2 (the weaker doubling form)."""
    return [n for n in sorted(points) if f(2 * n) > f(n) * f(n)]


def tail_onset(flags: Sequence[bool]) -> int | None:
    """Index from which every flag is True, if that index is in the first half."""
    if not flags or not flags[-1]:
        return None
    i = len(flags)
    while i > 0 and flags[i - 1]:
        i -= 1
    return i if i <= (len(flags) - 1) // 2 else None


def select_t(f: GrowthSeries, points: Sequence[int], t_max: int = 8) -> tuple[int, int]:
    """Smallest t >= 1 with f(2^t n) >= n f(n) on a tail of ``points``; returns (t, n0)."""
    pts = sorted(points)
    for t in range(1, t_max + 1):
        flags = [f(2 ** t * n) >= n * f(n) for n in pts]
        i = tail_onset(flags)
        if i is not None:
            return t, pts[i]
    raise NotEvidenced(f"condition f ~ nf not evidenced: no t <= {t_max} works on the sample")


def f_prime(f: GrowthSeries, t: int, points: Iterable[int] | None = None) -> GrowthSeries:
    """f'(n) = sum_{i<t} n^{-i/t} f(2^i n), evaluated at high precision."""
    if t < 1:
        raise ValueError("t must be at least 1")

    def fp(n):
        with mpmath.workprec(PREC):
            n_ = mpmath.mpf(n)
            return mpmath.fsum(n_ ** (-mpmath.mpf(i) / t) * mpmath.mpf(f(2 ** i * n)) for i in range(t))

    pts = f.points if points is None else list(points)
    out = GrowthSeries({n: fp(n) for n in pts}, name=f"{f.name}'(t={t})", func=fp if f.func else None)
    out.meta["t"] = t
    return out


# -- conditions on the dyadic grid -----------------------------------------------

@dataclass
class ConditionResult:
    holds: bool
    onset_index: int | None
    onset_n: int | None
    worst_margin: float | None
    margins: list[float] = field(default_factory=list)


@dataclass
class ConditionsReport:
    t: int
    eps: float
    grid: list[int]
    a: ConditionResult
    b: ConditionResult
    b_decay_rate: float | None  # fitted slope of log2 of the ratio per dyadic step
    b_weak: ConditionResult  # f'(2^{k+1}) <= f'(2^k)^2
    c_partial_products: list[float]
    c_stabilized: bool
    c_stable_from: int | None
    c_ratio_decay: float | None  # largest successive quotient of the ratios on the tail
    c_tol: float

    def summary(self) -> dict:
        return {
            "t": self.t,
            "a_holds": self.a.holds,
            "a_onset_n": self.a.onset_n,
            "a_worst_margin": self.a.worst_margin,
            "b_holds": self.b.holds,
            "b_onset_n": self.b.onset_n,
            "b_decay_rate": self.b_decay_rate,
            "c_stabilized": self.c_stabilized,
            "c_limit": self.c_partial_products[-1] if self.c_partial_products else None,
        }


def _result(values: list, pts: list[int]) -> ConditionResult:
    """values are margins in log2 units: >= -eps means the inequality holds."""
    flags = [v >= -EPS for v in values]
    i = tail_onset(flags)
    tail = values[i:] if i is not None else values
    return ConditionResult(
        holds=i is not None,
        onset_index=i,
        onset_n=pts[i] if i is not None else None,
        worst_margin=float(min(tail)) if tail else None,
        margins=[float(v) for v in values],
    )


def check_conditions(fp: GrowthSeries, t: int, k_max: int = 30, c_tol: float = 1e-6) -> ConditionsReport:
    """Evaluate the three dyadic conditions of the regularised function.

    (a) f'(2n) >= (1/2) n^{1/t} f'(n) for n = 2^k;
    (b) f'(2^{k+1}) / f'(2^k)^2 <= 2^{-k/2}, plus the decay rate of the ratio;
    (c) partial products of prod (1 + f'(2^k)/f'(2^{k+1})) and whether they
        settle within ``c_tol``.
    Margins are logs base 2 of (right side / left side).
    """
    with mpmath.workprec(PREC):
        ks = list(range(0, k_max + 1))
        pts = [2 ** k for k in ks]
        val = {k: mpmath.mpf(fp(2 ** k)) for k in range(0, k_max + 2)}
        log2 = lambda x: mpmath.log(x, 2)  # noqa: E731

        a_margin = [
            log2(val[k + 1]) - log2(mpmath.mpf(2) ** (mpmath.mpf(k) / t - 1) * val[k]) for k in ks
        ]
        ratios = [val[k + 1] / val[k] ** 2 for k in ks]
        b_margin = [-mpmath.mpf(k) / 2 - log2(r) for k, r in zip(ks, ratios)]
        b_weak = [-log2(r) for r in ratios]
        a = _result(a_margin, pts)
        b = _result(b_margin, pts)
        bw = _result(b_weak, pts)

        decay = None
        if b.onset_index is not None and len(ks) - b.onset_index >= 2:
            xs = ks[b.onset_index:]
            ys = [float(log2(r)) for r in ratios[b.onset_index:]]
            mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
            decay = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)

        qs = [val[k] / val[k + 1] for k in ks]
        prods, p = [], mpmath.mpf(1)
        for q in qs:
            p *= 1 + q
            prods.append(p)
        final = prods[-1]
        stable_from = None
        for i in range(len(prods)):
            if all(abs(x - final) <= c_tol for x in prods[i:]) and i < len(prods) - 1:
                stable_from = i
                break
        increasing = all(y >= x for x, y in zip(prods, prods[1:]))
        tail = qs[len(qs) // 2:]
        quot = [float(y / x) for x, y in zip(tail, tail[1:]) if x]
        return ConditionsReport(
            t=t,
            eps=float(EPS),
            grid=pts,
            a=a,
            b=b,
            b_decay_rate=decay,
            b_weak=bw,
            c_partial_products=[float(x) for x in prods],
            c_stabilized=stable_from is not None and increasing and abs(prods[-1] - prods[-2]) <= c_tol,
            c_stable_from=stable_from,
            c_ratio_decay=max(quot) if quot else None,
            c_tol=c_tol,
        )


def ratio_decay_bound(fp: GrowthSeries, t: int, k_max: int = 30) -> list[bool]:
    """For n = 2^k: f'(n)/f'(2n) <= 2 n^{-1/t} (what condition (a) gives)."""
    with mpmath.workprec(PREC):
        out = []
        for k in range(k_max + 1):
            n = mpmath.mpf(2) ** k
            lhs = mpmath.mpf(fp(2 ** k)) / mpmath.mpf(fp(2 ** (k + 1)))
            out.append(lhs <= 2 * n ** (-mpmath.mpf(1) / t) * (1 + EPS))
        return out
