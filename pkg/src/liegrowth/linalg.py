"""Exact rank computations for sparse integer matrices.

Rows are dictionaries ``{column: value}``.  Over the rationals elimination is
fraction free: rows stay integral and are divided by their content after each
step, so entries stay small for the +-1 matrices that show up here.  Over
GF(p) arithmetic is modular.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Hashable, Iterable, Mapping


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field GF(p), p odd."""

    p: int | None = None

    def __post_init__(self):
        if self.p is None:
            return
        if self.p == 2:
            raise ValueError("characteristic 2 is not supported")
        if self.p < 3 or any(self.p % k == 0 for k in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError(f"{self.p} is not an odd prime")

    @property
    def name(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip().upper()
        if text in ("Q", "QQ", "RATIONALS"):
            return cls(None)
        if text.startswith("GF(") and text.endswith(")"):
            return cls(int(text[3:-1]))
        if text.isdigit():
            return cls(int(text))
        raise ValueError(f"unknown field {text!r}")

    def __str__(self):
        return self.name


QQ = Field(None)
DEFAULT_PRIME = 32003


def _normalize(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    # fix the sign of the leading entry so reduced rows are canonical
    lead = row[min(row)]
    if lead < 0:
        row = {k: -v for k, v in row.items()}
    return row


def _to_int_row(row: Mapping) -> dict:
    """Clear denominators of a rational row."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    return {k: int(v * den) for k, v in row.items() if v}


class EchelonBasis:
    """Incrementally maintained row echelon form.

    Each stored row has a distinct pivot, its smallest column.  ``add``
    reduces a new row against the stored ones and keeps it if something is
    left, so ``len(basis)`` is the rank of everything added so far.
    """

    def __init__(self, field: Field = QQ):
        self.field = field
        self.pivots: dict[int, dict] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: Mapping) -> dict:
        p = self.field.p
        if p is None:
            r = _to_int_row(row)
        else:
            r = {k: int(v) % p for k, v in row.items() if int(v) % p}
        while r:
            c = min(r)
            piv = self.pivots.get(c)
            if piv is None:
                break
            if p is None:
                a, b = piv[c], r[c]
                out = {k: a * v for k, v in r.items()}
                for k, v in piv.items():
                    nv = out.get(k, 0) - b * v
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
                r = _normalize(out) if out else out
            else:
                f = r[c]
                for k, v in piv.items():
                    nv = (r.get(k, 0) - f * v) % p
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        return r

    def add(self, row: Mapping) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        c = min(r)
        if self.field.p is None:
            r = _normalize(r)
        else:
            inv = pow(r[c], -1, self.field.p)
            r = {k: v * inv % self.field.p for k, v in r.items()}
        self.pivots[c] = r
        return True

    def contains(self, row: Mapping) -> bool:
        return not self.reduce(row)


def rank(rows: Iterable[Mapping], field: Field = QQ) -> int:
    basis = EchelonBasis(field)
    for row in rows:
        basis.add(row)
    return len(basis)


def left_kernel(rows: list[Mapping]) -> list[dict[int, Fraction]]:
    """Basis of {c : sum_i c_i rows[i] = 0} over the rationals.

    Returned vectors are dictionaries indexed by row number.
    """
    # augment each row with a unit tag column; tags sort after every real column
    tagged = []
    for i, row in enumerate(rows):
        r = {(0, k): Fraction(v) for k, v in row.items() if v}
        r[(1, i)] = Fraction(1)
        tagged.append(r)
    pivots: dict = {}
    kernel = []
    for r in tagged:
        while True:
            real = [k for k in r if k[0] == 0]
            if not real:
                break
            c = min(real)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = {k: v / r[c] for k, v in r.items()}
                r = None
                break
            f = r[c]
            for k, v in piv.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if r is not None:
            kernel.append({k[1]: v for k, v in r.items()})
    return kernel


@dataclass
class GradedRankProblem:
    """A sparse integer matrix whose rank is a graded dimension.

    ``columns`` labels the column indices (e.g. the basis words of A(n));
    ``labels`` labels the rows (e.g. the pairs (u, v) of a commutator).
    """

    degree: int
    columns: list[Hashable]
    rows: list[dict[int, int]] = field(default_factory=list)
    labels: list[Hashable] = field(default_factory=list)

    def add_row(self, label, row: dict[int, int]):
        self.labels.append(label)
        self.rows.append(row)

    def rank(self, field: Field = QQ) -> int:
        return rank(self.rows, field)

    def dense(self) -> list[list[int]]:
        out = []
        for row in self.rows:
            line = [0] * len(self.columns)
            for k, v in row.items():
                line[k] = v
            out.append(line)
        return out
