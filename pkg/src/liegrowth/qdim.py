"""The scale Phi^q_alpha and q-dimension estimates.

    Phi^1_a(n) = a
    Phi^2_a(n) = n^a
    Phi^3_a(n) = exp(n^{a/(a+1)})
    Phi^q_a(n) = exp(n / (ln^{(q-3)} n)^{1/a})      q >= 4

All evaluation happens in log space with mpmath at ``PREC`` bits, so values
far beyond the double range are fine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .regularize import EPS, PREC, GrowthSeries, ceil_exp, tail_onset

ABOVE = mpmath.inf  # f is above every function of the level
BELOW = mpmath.mpf(0)  # f is below every function of the level


class DomainError(ValueError):
    pass


def iter_log(k: int, n) -> mpmath.mpf:
    """ln applied k times; every intermediate value must stay positive."""
    with mpmath.workprec(PREC):
        x = mpmath.mpf(n)
        if x <= 0:
            raise DomainError(f"ln^({k}) undefined at {n}")
        for i in range(k):
            x = mpmath.log(x)
            if x <= 0:
                raise DomainError(f"ln^({i + 1})({n}) = {mpmath.nstr(x, 6)} is not positive")
        return x


def n_min(q: int) -> int:
    """Smallest admissible argument of level q."""
    if q <= 3:
        return 2
    n = 2
    while True:
        try:
            if iter_log(q - 3, n) > 1:
                return n
        except DomainError:
            pass
        n += 1


def _guard(q: int, n):
    if q < 1:
        raise DomainError("level q must be at least 1")
    if q >= 4:
        L = iter_log(q - 3, n)
        if L <= 1:
            raise DomainError(f"ln^({q - 3})({n}) <= 1: outside the domain of level {q}")
        return L
    if n < 2:
        raise DomainError(f"n = {n} below the domain of level {q}")
    return None


def log_phi(q: int, alpha, n) -> mpmath.mpf:
    """ln Phi^q_alpha(n)."""
    with mpmath.workprec(PREC):
        a = mpmath.mpf(alpha)
        if a <= 0:
            raise DomainError("alpha must be positive")
        L = _guard(q, n)
        n_ = mpmath.mpf(n)
        if q == 1:
            return mpmath.log(a)
        if q == 2:
            return a * mpmath.log(n_)
        if q == 3:
            return n_ ** (a / (a + 1))
        return n_ / L ** (1 / a)


def phi(q: int, alpha, n) -> mpmath.mpf:
    with mpmath.workprec(PREC):
        return mpmath.exp(log_phi(q, alpha, n))


def phi_ceil(q: int, alpha, n) -> int:
    """⌈Phi^q_alpha(n)⌉ as an exact integer."""
    log_phi(q, alpha, n)  # domain check
    return ceil_exp(lambda: log_phi(q, alpha, n))


def alpha_hat_log(q: int, log_f, n) -> mpmath.mpf:
    """The alpha with ln Phi^q_alpha(n) = log_f, or ABOVE / BELOW."""
    with mpmath.workprec(PREC):
        lf = mpmath.mpf(log_f)
        L = _guard(q, n)
        n_ = mpmath.mpf(n)
        if q == 1:
            return mpmath.exp(lf)
        if lf <= 0:
            return BELOW
        if q == 2:
            return lf / mpmath.log(n_)
        if q == 3:
            r = mpmath.log(lf) / mpmath.log(n_)
            if r >= 1:
                return ABOVE
            if r <= 0:
                return BELOW
            return r / (1 - r)
        if lf >= n_:
            return ABOVE
        return mpmath.log(L) / mpmath.log(n_ / lf)


def alpha_hat(q: int, f, n) -> mpmath.mpf:
    """Pointwise inversion of f(n) = Phi^q_alpha(n); ``f`` is a series or a callable."""
    with mpmath.workprec(PREC):
        v = f(n)
        if q == 1:
            return mpmath.mpf(v)
        return alpha_hat_log(q, mpmath.log(mpmath.mpf(v)), n)


def _log_values(f, n):
    if isinstance(f, GrowthSeries) and f.meta.get("log"):
        return f(n)
    with mpmath.workprec(PREC):
        return mpmath.log(mpmath.mpf(f(n)))


@dataclass
class DimEstimate:
    level: int
    trace: dict[int, mpmath.mpf]
    dim: mpmath.mpf  # max of alpha-hat over the tail window
    dimsup: mpmath.mpf  # min over the tail window
    window: tuple[int, int]

    def to_json(self) -> dict:
        def num(x):
            return "inf" if x == ABOVE else float(x)

        return {
            "level": self.level,
            "Dim": num(self.dim),
            "Dimsup": num(self.dimsup),
            "window": list(self.window),
            "alpha_hat": {str(n): num(a) for n, a in sorted(self.trace.items())},
        }


def alpha_trace(q: int, f, points) -> dict[int, mpmath.mpf]:
    """alpha-hat at every admissible point; points outside the level's domain are skipped."""
    out = {}
    for n in sorted(points):
        try:
            if q == 1:
                out[n] = alpha_hat(1, f, n)
            else:
                out[n] = alpha_hat_log(q, _log_values(f, n), n)
        except DomainError:
            continue
    return out


def dim_estimate(q: int, f, points, tail_fraction: float = 0.5, min_samples: int = 16) -> DimEstimate:
    """Finite-sample surrogates for Dim^q (tail max) and Dimsup^q (tail min)."""
    trace = alpha_trace(q, f, points)
    pts = sorted(trace)
    # the tail starts at the median sample, so 2^1..2^30 gives 16 tail points
    start = int((len(pts) - 1) * (1 - tail_fraction))
    tail = pts[start:]
    if len(tail) < min_samples:
        raise ValueError(
            f"only {len(tail)} admissible samples in the tail window, {min_samples} required"
        )
    vals = [trace[n] for n in tail]
    return DimEstimate(q, trace, max(vals), min(vals), (tail[0], tail[-1]))


# -- doubling and layer-gap checks ---------------------------------------------------------------

def log_between_layers(q: int, n) -> mpmath.mpf:
    """ln f_q(n) for f_2(n) = n^{ln n} and f_q(n) = exp(n / (ln^{(q-2)} n)^{ln n}), q >= 3."""
    with mpmath.workprec(PREC):
        n_ = mpmath.mpf(n)
        ln = mpmath.log(n_)
        if q == 2:
            return ln * ln
        if q < 2:
            raise DomainError("between-layer functions start at q = 2")
        return n_ / iter_log(q - 2, n) ** ln


def between_layers(q: int, n) -> int:
    log_between_layers(q, n)
    return ceil_exp(lambda: log_between_layers(q, n))


def _log_ceil(log_v):
    """Upper bound for ln⌈v⌉ given ln v: ln(v + 1)."""
    return log_v + mpmath.log1p(mpmath.exp(-log_v))


def _geq(a, b) -> bool:
    """a >= b up to the relative slack EPS."""
    return a >= b - EPS * abs(b)


def _trend(trace: dict, tail_fraction=0.5) -> tuple[bool, bool]:
    """(strictly increasing, strictly decreasing) along the tail of the trace."""
    pts = sorted(trace)
    tail = [trace[n] for n in pts[len(pts) - max(2, int(len(pts) * tail_fraction)):]]
    if any(v == ABOVE for v in tail):
        return True, False
    if all(v == BELOW for v in tail):
        return False, True
    inc = all(b > a for a, b in zip(tail, tail[1:]))
    dec = all(b < a for a, b in zip(tail, tail[1:])) and all(v >= 0 for v in tail)
    return inc, dec


@dataclass
class Check:
    name: str
    holds: bool
    onset_n: int | None
    failures: list[int] = field(default_factory=list)


def _check(name, pts, flags) -> Check:
    i = tail_onset(flags)
    return Check(name, i is not None, pts[i] if i is not None else None,
                 [n for n, ok in zip(pts, flags) if not ok])


@dataclass
class InequalityReport:
    kind: str
    q: int
    sigma: float | None
    grid: list[int]
    checks: list[Check]
    traces: dict[int, dict[int, mpmath.mpf]] = field(default_factory=dict)
    trends: dict[int, dict[str, bool]] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "q": self.q,
            "sigma": self.sigma,
            "grid": [self.grid[0], self.grid[-1]] if self.grid else [],
            "checks": {c.name: {"holds": c.holds, "onset_n": c.onset_n} for c in self.checks},
            "trends": self.trends,
        }


def _grid(k_max: int, start: int) -> list[int]:
    return [2 ** k for k in range(0, k_max + 1) if 2 ** k >= start]


def verify_doubling(q: int, sigma: float, k_max: int = 24, dense_max: int = 128) -> InequalityReport:
    """Properties of ⌈Phi^q_sigma⌉ used to realise q-dimension sigma (q >= 3).

    increasing        phi(2n) >= phi(n) on the dyadic grid
    submultiplicative phi(m+n) <= phi(m) phi(n) on a dense tail and
                      phi(2n) <= phi(n)^2 on the grid
    doubling          phi(2n) >= n phi(n)
    chain_*           the intermediate inequalities of the argument
    """
    if q < 3:
        raise ValueError("the q-dimension realisation concerns q >= 3")
    with mpmath.workprec(PREC):
        lp = lambda n: log_phi(q, sigma, n)  # noqa: E731
        start = n_min(q)
        pts = _grid(k_max, start)
        checks = []
        checks.append(_check("increasing", pts, [_geq(lp(2 * n), _log_ceil(lp(n))) for n in pts]))
        checks.append(_check("dyadic_submultiplicative", pts,
                             [_geq(2 * lp(n), _log_ceil(lp(2 * n))) for n in pts]))
        dense = list(range(start, dense_max + 1))
        vals = {n: phi_ceil(q, sigma, n) for n in range(start, 2 * dense_max + 2)}
        sub_flags = [all(vals[m + n] <= vals[m] * vals[n] for m in dense if m <= n) for n in dense]
        checks.append(_check("submultiplicative", dense, sub_flags))
        checks.append(_check("doubling", pts,
                             [_geq(lp(2 * n), mpmath.log(n) + _log_ceil(lp(n))) for n in pts]))
        s = mpmath.mpf(sigma) / (sigma + 1)
        if q >= 4:
            checks.append(_check("chain_exp_sqrt", pts,
                                 [_geq(lp(2 * n), lp(n) + mpmath.sqrt(n)) for n in pts]))
            checks.append(_check("chain_sqrt_vs_n", pts,
                                 [_geq(mpmath.sqrt(n) + lp(n), mpmath.log(n) + _log_ceil(lp(n))) for n in pts]))
        else:
            checks.append(_check("chain_intermediate", pts,
                                 [_geq(lp(2 * n), (2 * mpmath.mpf(n)) ** s) for n in pts]))
            checks.append(_check("chain_power_of_two", pts,
                                 [_geq((2 * mpmath.mpf(n)) ** s, s * mpmath.mpf(n) ** s * mpmath.log(2) + lp(n))
                                  for n in pts]))
            checks.append(_check("chain_vs_n", pts,
                                 [_geq(s * mpmath.mpf(n) ** s * mpmath.log(2) + lp(n),
                                       mpmath.log(n) + _log_ceil(lp(n))) for n in pts]))
        return InequalityReport("doubling", q, sigma, pts, checks)


def verify_layer_gap(q: int, k_max: int = 24) -> InequalityReport:
    """f_q(2n) >= n f_q(n), and alpha-hat traces at levels q (expected to
    diverge) and q + 1 (expected to vanish)."""
    if q < 2:
        raise ValueError("q must be at least 2")
    with mpmath.workprec(PREC):
        start = max(n_min(q), n_min(q + 1), 3)
        pts = []
        for n in _grid(k_max, start):
            try:
                log_between_layers(q, n)
                log_between_layers(q, 2 * n)
            except DomainError:
                continue
            pts.append(n)
        lf = {n: log_between_layers(q, n) for n in pts}
        lf2 = {n: log_between_layers(q, 2 * n) for n in pts}
        checks = [
            _check("doubling", pts, [lf2[n] >= mpmath.log(n) + _log_ceil(lf[n]) for n in pts]),
            _check("increasing", pts, [lf2[n] >= lf[n] for n in pts]),
        ]
        series = GrowthSeries(lf, name=f"ln f_{q}", meta={"log": True})
        traces, trends = {}, {}
        for level in (q, q + 1):
            tr = alpha_trace(level, series, pts)
            traces[level] = tr
            inc, dec = _trend(tr)
            trends[level] = {"diverging": inc, "vanishing": dec}
        checks.append(Check(f"level_{q}_diverges", trends[q]["diverging"], None))
        checks.append(Check(f"level_{q + 1}_vanishes", trends[q + 1]["vanishing"], None))
        return InequalityReport("layer_gap", q, None, pts, checks, traces, trends)


def verify_corollaries(q: int, sigma: float | None = None, k_max: int = 24) -> list[InequalityReport]:
    out = []
    if sigma is not None and q >= 3:
        out.append(verify_doubling(q, sigma, k_max))
    if q >= 2:
        out.append(verify_layer_gap(q, k_max))
    return out
