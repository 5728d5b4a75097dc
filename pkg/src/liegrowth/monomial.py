"""The monomial algebra of an infinite word.

A_w is the free algebra on the letters modulo every monomial that is not a
factor of w.  Its degree-n component has the length-n factors as a basis, so
all computations reduce to lookups in a :class:`FactorLanguage` and exact
ranks of small integer matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import QQ, EchelonBasis, Field, GradedRankProblem, left_kernel
from .words import FactorLanguage, InsufficientPrefix


class NotNilpotent(ValueError):
    pass


@dataclass
class GradedVector:
    """Homogeneous element of A_w: a combination of length-``degree`` factors."""

    degree: int
    coeffs: dict[str, Fraction]

    def __post_init__(self):
        self.coeffs = {w: Fraction(c) for w, c in self.coeffs.items() if c}
        if any(len(w) != self.degree for w in self.coeffs):
            raise ValueError("support does not match the degree")

    def __add__(self, other: "GradedVector") -> "GradedVector":
        if other.degree != self.degree:
            raise ValueError("cannot add vectors of different degrees")
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return GradedVector(self.degree, out)

    def __neg__(self):
        return GradedVector(self.degree, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.coeffs


class MonomialAlgebra:
    """A_w truncated at the horizon of its factor language."""

    def __init__(self, language: FactorLanguage, field: Field = QQ):
        self.language = language
        self.field = field
        self.letters = language.alphabet.letters

    @property
    def horizon(self) -> int:
        return self.language.horizon

    def basis(self, n: int) -> tuple[str, ...]:
        self._check(n)
        return self.language.words(n)

    def dim_component(self, n: int) -> int:
        self._check(n)
        return self.language.c(n)

    def growth(self, n: int, unit: bool = False) -> int:
        """dim of A(1) + ... + A(n); add 1 for the unit when ``unit`` is set."""
        self._check(n)
        return sum(self.language.c(i) for i in range(1, n + 1)) + (1 if unit else 0)

    def multiply(self, u: str, v: str) -> str | None:
        """Product of two monomials; None stands for zero."""
        if len(u) + len(v) > self.horizon:
            raise InsufficientPrefix(
                f"degree {len(u) + len(v)} exceeds horizon {self.horizon}"
            )
        for x in (u, v):
            if x not in self.language:
                raise ValueError(f"{x!r} is not a basis monomial")
        uv = u + v
        return uv if uv in self.language else None

    def mul_vectors(self, a: GradedVector, b: GradedVector) -> GradedVector:
        out: dict[str, Fraction] = {}
        for u, cu in a.coeffs.items():
            for v, cv in b.coeffs.items():
                uv = self.multiply(u, v)
                if uv is not None:
                    out[uv] = out.get(uv, 0) + cu * cv
        return GradedVector(a.degree + b.degree, out)

    def bracket(self, a: GradedVector, b: GradedVector) -> GradedVector:
        return self.mul_vectors(a, b) - self.mul_vectors(b, a)

    def nilpotency_degree(self, letter: str) -> int:
        """Smallest t with letter**t not a factor."""
        if letter not in self.letters:
            raise ValueError(f"{letter!r} is not a generator")
        for t in range(1, self.horizon + 1):
            if letter * t not in self.language:
                return t
        raise NotNilpotent(
            f"{letter}^t is a factor for every t <= {self.horizon}: not nilpotent up to horizon"
        )

    # -- centre ---------------------------------------------------------------

    def _ad_rows(self, words, letters) -> GradedRankProblem:
        """Matrix of z -> ([z, a] for a in letters) on the span of ``words``."""
        n = len(words[0]) if words else 0
        cols = [(a, w) for a in letters for w in self.basis(n + 1)]
        index = {c: i for i, c in enumerate(cols)}
        prob = GradedRankProblem(degree=n, columns=cols)
        for z in words:
            row: dict[int, int] = {}
            for a in letters:
                for word, sign in ((z + a, 1), (a + z, -1)):
                    if word in self.language:
                        k = index[(a, word)]
                        row[k] = row.get(k, 0) + sign
            prob.add_row(z, {k: v for k, v in row.items() if v})
        return prob

    def center_component(self, n: int) -> int:
        """dim Z(A_w) ∩ A(n), as the nullity of z -> ([z, a])_a on A(n)."""
        if n == 0:
            return 1
        if n < 0:
            raise ValueError("degree must be non-negative")
        self._check(n + 1)
        words = self.basis(n)
        prob = self._ad_rows(words, self.letters)
        return len(words) - prob.rank(self.field)

    def ad_kernel(self, n: int, letter: str, words=None) -> list[dict[str, Fraction]]:
        """Basis of Ker(ad_letter) inside the span of ``words`` (default A(n))."""
        self._check(n + 1)
        words = list(self.basis(n) if words is None else words)
        if not words:
            return []
        prob = self._ad_rows(words, (letter,))
        return [{words[i]: c for i, c in vec.items()} for vec in left_kernel(prob.rows)]

    def ad_kernel_intersection(self, n: int) -> int:
        """dim of the intersection of Ker(ad_a) over all generators a, on A(n).

        Computed from separate kernel bases, intersected through their linear
        relations, as an independent route to :meth:`center_component`.
        """
        words = self.basis(n)
        index = {w: i for i, w in enumerate(words)}
        kernels = [self.ad_kernel(n, a) for a in self.letters]

        def as_row(vec):
            return {index[w]: c for w, c in vec.items()}

        current = [as_row(v) for v in kernels[0]]
        for K in kernels[1:]:
            krows = [as_row(v) for v in K]
            both = current + krows
            if not both:
                return 0
            # a relation sum a_i u_i + sum b_j k_j = 0 gives sum a_i u_i in U ∩ K
            rel = left_kernel(both)
            inter = []
            for coeffs in rel:
                vec: dict[int, Fraction] = {}
                for i, c in coeffs.items():
                    if i < len(current):
                        for k, v in current[i].items():
                            vec[k] = vec.get(k, 0) + c * v
                inter.append({k: v for k, v in vec.items() if v})
            current = list(_independent(v for v in inter if v))
        return len(current)

    def _check(self, n: int):
        if n > self.horizon:
            raise InsufficientPrefix(f"degree {n} exceeds horizon {self.horizon}")


def _independent(rows):
    basis = EchelonBasis(QQ)
    for r in rows:
        if basis.add(r):
            yield r


def growth_table(alg: MonomialAlgebra, N: int) -> list[tuple[int, int, int]]:
    """Rows (n, c(n), gamma(n)) for n = 1..N, gamma without the unit."""
    out, total = [], 0
    for n in range(1, N + 1):
        c = alg.dim_component(n)
        total += c
        out.append((n, c, total))
    return out

