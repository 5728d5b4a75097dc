"""The commutator Lie algebra [A_w, A_w] of a monomial algebra.

The degree-n part of [A, A] is spanned by the brackets [u, v] of basis
monomials with |u| + |v| = n, so its dimension is the rank of a {-1, 0, 1}
matrix with one row per pair and one column per length-n factor.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .linalg import QQ, Field, GradedRankProblem
from .monomial import MonomialAlgebra
from .words import InsufficientPrefix


def commutator_problem(alg: MonomialAlgebra, n: int, ordered_pairs: bool = True) -> GradedRankProblem:
    """Rows [u, v] = uv - vu for |u| + |v| = n, |u|, |v| >= 1.

    With ``ordered_pairs=False`` only pairs with u < v (as strings) are kept;
    the rank is the same because the (v, u) row is the negative of (u, v).
    """
    if n > alg.horizon:
        raise InsufficientPrefix(f"degree {n} exceeds horizon {alg.horizon}")
    cols = list(alg.basis(n))
    index = {w: i for i, w in enumerate(cols)}
    prob = GradedRankProblem(degree=n, columns=cols)
    for k in range(1, n):
        for u in alg.basis(k):
            for v in alg.basis(n - k):
                if not ordered_pairs and not u < v:
                    continue
                row: dict[int, int] = {}
                uv, vu = u + v, v + u
                if uv in index:
                    row[index[uv]] = row.get(index[uv], 0) + 1
                if vu in index:
                    row[index[vu]] = row.get(index[vu], 0) - 1
                prob.add_row((u, v), {c: x for c, x in row.items() if x})
    return prob


def commutator_dim(alg: MonomialAlgebra, n: int, field: Field = QQ) -> int:
    """dim([A, A] ∩ A(n)).

    Exact over QQ.  Over GF(p) the rank of the reduced matrix can only drop,
    so the value is a certified lower bound for the rational one.
    """
    if n < 1:
        raise ValueError("degree must be positive")
    if n == 1:
        return 0
    return commutator_problem(alg, n).rank(field)


@dataclass
class QuarterReport:
    n: int
    field: str
    dimA: int
    dimA_n2: int
    commDim: int
    bound: Fraction
    passed: bool
    margin: Fraction
    # intermediate quantities of the pigeonhole argument
    split_dims: dict[str, int] = field(default_factory=dict)
    i: str = ""
    j: str = ""
    dim_xiSi: int = 0
    ker_dims: dict[str, int] = field(default_factory=dict)
    image_dim: int = 0
    chain_ok: bool = False

    def to_json(self) -> dict:
        d = asdict(self)
        d["bound"] = float(self.bound)
        d["margin"] = float(self.margin)
        d["pass"] = d.pop("passed")
        return d


def verify_quarter_bound(alg: MonomialAlgebra, n: int, field: Field = QQ) -> QuarterReport:
    """Check dim([A, A] ∩ A(n)) >= dim A(n-2) / 4 and record the proof's split.

    A(n-1) splits as the sum over letters a of a*S_a (words starting with a).
    The report picks a letter i whose piece is largest, a letter j whose
    ad-kernel inside that piece is smallest, and records the chain
    commDim >= dim ad_j(x_i S_i) >= dim(x_i S_i) / 2 >= dim A(n-2) / 4.
    """
    if n <= 2:
        raise ValueError("the quarter bound concerns degrees n > 2")
    dimA = alg.dim_component(n)
    dimA2 = alg.dim_component(n - 2)
    comm = commutator_dim(alg, n, field)
    bound = Fraction(dimA2, 4)

    prev = alg.basis(n - 1)
    pieces = {a: [w for w in prev if w.startswith(a)] for a in alg.letters}
    split = {a: len(ws) for a, ws in pieces.items()}
    i = max(alg.letters, key=lambda a: (split[a], -alg.letters.index(a)))
    kers = {a: len(alg.ad_kernel(n - 1, a, pieces[i])) for a in alg.letters}
    j = min(alg.letters, key=lambda a: (kers[a], alg.letters.index(a)))
    image = split[i] - kers[j]
    chain = (
        comm >= image
        and 2 * image >= split[i]
        and 2 * split[i] >= len(prev)
        and 4 * split[i] >= 2 * dimA2
    )
    return QuarterReport(
        n=n,
        field=field.name,
        dimA=dimA,
        dimA_n2=dimA2,
        commDim=comm,
        bound=bound,
        passed=comm >= bound,
        margin=comm - bound,
        split_dims=split,
        i=i,
        j=j,
        dim_xiSi=split[i],
        ker_dims=kers,
        image_dim=image,
        chain_ok=chain,
    )


@dataclass
class ProxyRow:
    n: int
    proxy: int
    lower: Fraction
    upper: int

    @property
    def ok(self) -> bool:
        return self.lower <= self.proxy <= self.upper


def lie_growth_proxy(alg: MonomialAlgebra, N: int, field: Field = QQ) -> list[ProxyRow]:
    """n -> sum_{m=3}^{n} dim([A, A] ∩ A(m)), with the sandwich bounds.

    lower(n) = (1/4) sum_{m<=n-2} c(m), upper(n) = sum_{m<=n} c(m).
    """
    if N > alg.horizon:
        raise InsufficientPrefix(f"N={N} exceeds horizon {alg.horizon}")
    rows = []
    total = 0
    for n in range(1, N + 1):
        if n >= 3:
            total += commutator_dim(alg, n, field)
        lower = Fraction(sum(alg.dim_component(m) for m in range(1, n - 1)), 4)
        upper = alg.growth(n)
        rows.append(ProxyRow(n, total, lower, upper))
    return rows


def quarter_threshold(dim_a_n2: int) -> int:
    """Smallest integer dimension meeting the quarter bound."""
    return math.ceil(Fraction(dim_a_n2, 4))
