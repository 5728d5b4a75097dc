"""Finite-support arithmetic in the convolution algebra of a subshift groupoid.

Elements of the groupoid are germs (m, x) with x a point of the subshift and
m an integer shift; the shift acts by (x^m)[i] = x[i + m].  A bisection is a
pair (m, C) with C a cylinder, i.e. finitely many coordinate constraints.
Composition of bisections is

    (m1, C1) * (m2, C2) = (m1 + m2, C2 ∩ s^{-m2} C1),

where s^{-m} C moves every constraint of C from coordinate i to i + m.

Coordinates run against the reading direction of the word: a point x
corresponds to a bi-infinite word v with x[i] = v[-i].  With that
orientation phi(x) = D_x T and phi(y) = D_y T send a monomial to a nonzero
element exactly when the monomial is a factor, which is what makes phi a
homomorphism of the monomial algebra.

Elements are stored in a canonical form: for every shift class one window
[lo, hi] and a map from the allowed words over that window to nonzero
coefficients.  Full words over a common window are disjoint cylinders, so the
coefficient map determines the function.  Windows are shrunk greedily while
the function does not depend on a boundary coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .linalg import QQ, EchelonBasis, Field
from .monomial import MonomialAlgebra
from .words import FactorLanguage, InsufficientPrefix

EMPTY = (0, -1)  # the empty window; its only word is ""


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CylinderPattern:
    """Finitely many constraints coordinate -> letter; no constraints is the whole space."""

    constraints: tuple[tuple[int, str], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[int, str] | Iterable[tuple[int, str]] = ()) -> "CylinderPattern":
        items = dict(mapping)
        return cls(tuple(sorted(items.items())))

    @classmethod
    def word(cls, lo: int, word: str) -> "CylinderPattern":
        return cls(tuple((lo + i, a) for i, a in enumerate(word)))

    @property
    def window(self) -> tuple[int, int]:
        if not self.constraints:
            return EMPTY
        return self.constraints[0][0], self.constraints[-1][0]

    def shifted(self, m: int) -> "CylinderPattern":
        return CylinderPattern(tuple((i + m, a) for i, a in self.constraints))

    def intersect(self, other: "CylinderPattern") -> "CylinderPattern | None":
        """Conjunction of constraints, or None when two constraints clash."""
        out = dict(self.constraints)
        for i, a in other.constraints:
            if out.get(i, a) != a:
                return None
            out[i] = a
        return CylinderPattern(tuple(sorted(out.items())))


class Subshift:
    """The unit space, known through a factor language.

    ``words(k)`` lists the allowed fillings of a width-k window in coordinate
    order (the reversed factors of the word).  Exactness holds at widths where
    the language is L-stable.
    """

    def __init__(self, language: FactorLanguage):
        self.language = language
        self.letters = language.alphabet.letters
        self._words: dict[int, tuple[str, ...]] = {0: ("",)}

    @property
    def horizon(self) -> int:
        return self.language.horizon

    def words(self, k: int) -> tuple[str, ...]:
        w = self._words.get(k)
        if w is None:
            if k > self.horizon:
                raise InsufficientPrefix(
                    f"window of width {k} exceeds the language horizon {self.horizon}"
                )
            w = self._words[k] = tuple(sorted(f[::-1] for f in self.language.words(k)))
        return w

    def completions(self, lo: int, hi: int, pattern: CylinderPattern) -> list[str]:
        """Allowed words over [lo, hi] satisfying ``pattern`` (constraints inside the window)."""
        k = hi - lo + 1
        rel = tuple((i - lo, a) for i, a in pattern.constraints)
        return _completions(self, k, rel)

    def nonempty(self, pattern: CylinderPattern) -> bool:
        lo, hi = pattern.window
        if hi < lo:
            return True
        return bool(self.completions(lo, hi, pattern))

    # -- generators ---------------------------------------------------------

    def element(self, terms: Iterable[tuple[object, int, CylinderPattern]]) -> "GroupoidElement":
        """Canonical element from (coefficient, shift, pattern) triples."""
        return GroupoidElement(self, _canonicalize(self, terms))

    def zero(self) -> "GroupoidElement":
        return GroupoidElement(self, {})

    def one(self) -> "GroupoidElement":
        return self.element([(1, 0, CylinderPattern())])

    def D(self, letter: str) -> "GroupoidElement":
        """Characteristic function of {x : x[0] = letter}."""
        if letter not in self.letters:
            raise ValueError(f"{letter!r} is not a letter")
        return self.element([(1, 0, CylinderPattern.of({0: letter}))])

    def T(self, power: int = 1) -> "GroupoidElement":
        return self.element([(1, power, CylinderPattern())])

    def generators(self) -> list["GroupoidElement"]:
        """1, D_a for each letter, T and T^{-1}."""
        return [self.one()] + [self.D(a) for a in self.letters] + [self.T(1), self.T(-1)]

    def phi(self, v: str) -> "GroupoidElement":
        """Image of the monomial v under x_a -> D_a T."""
        out = self.one()
        for a in v:
            out = out * (self.D(a) * self.T())
        return out


@lru_cache(maxsize=65536)
def _completions_cached(words: tuple[str, ...], rel: tuple[tuple[int, str], ...]) -> tuple[str, ...]:
    return tuple(w for w in words if all(w[i] == a for i, a in rel))


def _completions(shift: Subshift, k: int, rel) -> list[str]:
    return list(_completions_cached(shift.words(k), rel))


def pattern_nonempty(pattern: CylinderPattern, language: FactorLanguage) -> bool:
    """Does some point of the subshift satisfy ``pattern``?"""
    return Subshift(language).nonempty(pattern)


@dataclass(frozen=True)
class Bisection:
    shift: int
    pattern: CylinderPattern = CylinderPattern()


def bisection_product(a: Bisection, b: Bisection, language: FactorLanguage | Subshift | None = None) -> Bisection | None:
    """Set product {gh : g in a, h in b}; None when it is empty.

    Without a language only clashing constraints are detected; with one,
    patterns with no point in the subshift also give None.
    """
    pat = b.pattern.intersect(a.pattern.shifted(b.shift))
    if pat is None:
        return None
    if language is not None:
        shift = language if isinstance(language, Subshift) else Subshift(language)
        if not shift.nonempty(pat):
            return None
    return Bisection(a.shift + b.shift, pat)


# -- canonical form ---------------------------------------------------------

Block = tuple[int, int, dict]  # lo, hi, {word: coeff}


def _canonicalize(shift: Subshift, terms) -> dict[int, Block]:
    by_shift: dict[int, list] = {}
    for coeff, m, pat in terms:
        if coeff:
            by_shift.setdefault(m, []).append((coeff, pat))
    out: dict[int, Block] = {}
    for m in sorted(by_shift):
        items = by_shift[m]
        lo = min((p.window[0] for _, p in items if p.constraints), default=None)
        if lo is None:
            lo, hi = EMPTY
        else:
            hi = max(p.window[1] for _, p in items if p.constraints)
        coeffs: dict[str, object] = {}
        for c, p in items:
            for w in shift.completions(lo, hi, p):
                coeffs[w] = coeffs.get(w, 0) + c
        coeffs = {w: c for w, c in coeffs.items() if c}
        if coeffs:
            out[m] = _shrink(shift, lo, hi, coeffs)
    return out


def _shrink(shift: Subshift, lo: int, hi: int, coeffs: dict) -> Block:
    """Drop boundary coordinates the coefficient function does not depend on."""
    while hi >= lo:
        k = hi - lo + 1
        allowed = shift.words(k)
        dropped = False
        for side in ("hi", "lo"):
            groups: dict[str, set] = {}
            for w in allowed:
                key = w[:-1] if side == "hi" else w[1:]
                groups.setdefault(key, set()).add(coeffs.get(w, 0))
            if all(len(vals) == 1 for vals in groups.values()):
                coeffs = {key: vals.pop() for key, vals in groups.items()}
                coeffs = {w: c for w, c in coeffs.items() if c}
                if side == "hi":
                    hi -= 1
                else:
                    lo += 1
                dropped = True
                break
        if not dropped:
            break
    if hi < lo:
        lo, hi = EMPTY
    return lo, hi, coeffs


class GroupoidElement:
    """A finitely supported locally constant function on the groupoid, in canonical form."""

    __hash__ = None

    def __init__(self, shift: Subshift, blocks: dict[int, Block]):
        self.subshift = shift
        self.blocks = blocks

    # -- linear structure -------------------------------------------------

    def terms(self):
        """Yield (coefficient, shift, pattern) for every canonical term."""
        for m, (lo, hi, coeffs) in self.blocks.items():
            for w, c in coeffs.items():
                yield c, m, CylinderPattern.word(lo, w)

    def __add__(self, other: "GroupoidElement") -> "GroupoidElement":
        self._same(other)
        return self.subshift.element(list(self.terms()) + list(other.terms()))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GroupoidElement":
        if not c:
            return self.subshift.zero()
        return GroupoidElement(
            self.subshift,
            {m: (lo, hi, {w: c * v for w, v in cs.items()}) for m, (lo, hi, cs) in self.blocks.items()},
        )

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, GroupoidElement):
            return self.scale(other)
        self._same(other)
        raw = []
        for m1, (lo1, hi1, c1) in self.blocks.items():
            for m2, (lo2, hi2, c2) in other.blocks.items():
                for w1, a in c1.items():
                    left = CylinderPattern.word(lo1 + m2, w1)
                    for w2, b in c2.items():
                        pat = CylinderPattern.word(lo2, w2).intersect(left)
                        if pat is not None:
                            raw.append((a * b, m1 + m2, pat))
        return self.subshift.element(raw)

    def bracket(self, other: "GroupoidElement") -> "GroupoidElement":
        return self * other - other * self

    def is_zero(self) -> bool:
        return not self.blocks

    def __eq__(self, other):
        if not isinstance(other, GroupoidElement):
            return NotImplemented
        return (self - other).is_zero()

    def canonicalize(self) -> "GroupoidElement":
        return self.subshift.element(self.terms())

    def same_form(self, other: "GroupoidElement") -> bool:
        """Literal equality of canonical forms."""
        return self.blocks == other.blocks

    @property
    def shifts(self) -> list[int]:
        return sorted(self.blocks)

    def max_coordinate(self) -> int:
        r = 0
        for lo, hi, _ in self.blocks.values():
            if hi >= lo:
                r = max(r, abs(lo), abs(hi))
        return r

    def dump(self) -> str:
        """One line per term: ``m | window [lo,hi] | word | coefficient``."""
        lines = []
        for m in sorted(self.blocks):
            lo, hi, cs = self.blocks[m]
            for w in sorted(cs):
                lines.append(f"{m} | window [{lo},{hi}] | {w} | {cs[w]}")
        return "\n".join(lines)

    def __repr__(self):
        return f"GroupoidElement({self.dump()!r})" if self.blocks else "GroupoidElement(0)"

    def _same(self, other):
        if other.subshift is not self.subshift:
            raise ValueError("elements live over different subshifts")


# -- linear algebra over the canonical basis --------------------------------

class Vectorizer:
    """Coordinates of elements in the basis (tag, shift, full word over [-R, R])."""

    def __init__(self, shift: Subshift, radius: int):
        self.subshift = shift
        self.radius = radius
        self.full = shift.words(2 * radius + 1)
        self.columns: dict[tuple, int] = {}

    def __call__(self, e: GroupoidElement, tag=0) -> dict[int, object]:
        R = self.radius
        row: dict[int, object] = {}
        for m, (lo, hi, cs) in e.blocks.items():
            if hi >= lo and (lo < -R or hi > R):
                raise ValueError(f"element window [{lo},{hi}] exceeds radius {R}")
            for W in self.full:
                c = cs.get(W[lo + R:hi + R + 1] if hi >= lo else "", 0)
                if c:
                    key = (tag, m, W)
                    col = self.columns.get(key)
                    if col is None:
                        col = self.columns[key] = len(self.columns)
                    row[col] = c
        return row


def span_rank(elements: list[GroupoidElement], field: Field = QQ) -> int:
    if not elements:
        return 0
    shift = elements[0].subshift
    R = max(e.max_coordinate() for e in elements)
    vec = Vectorizer(shift, R)
    basis = EchelonBasis(field)
    for e in elements:
        basis.add(vec(e))
    return len(basis)


def phi_injectivity_check(language: FactorLanguage, n: int, field: Field = QQ) -> bool:
    """phi-images of the length-n factors are linearly independent."""
    if n == 0:
        return True
    shift = Subshift(language)
    images = [shift.phi(v) for v in language.words(n)]
    return span_rank(images, field) == language.c(n)


def commutator_span_dim(language: FactorLanguage, n: int, field: Field = QQ) -> int:
    """dim span{[phi(u), phi(v)] : |u| + |v| = n}."""
    shift = Subshift(language)
    cache = {}

    def phi(v):
        if v not in cache:
            cache[v] = shift.phi(v)
        return cache[v]

    brackets = []
    for k in range(1, n):
        for u in language.words(k):
            for v in language.words(n - k):
                b = phi(u).bracket(phi(v))
                if not b.is_zero():
                    brackets.append(b)
    return span_rank(brackets, field)


# -- filtration growth ------------------------------------------------------

@dataclass
class FiltrationGrowth:
    """dim of the span of products of length <= n of 1, D_a, T, T^{-1}."""

    dims: list[int]
    basis: list[list[GroupoidElement]]  # new basis elements per level
    sandwich_C: int | None
    C_max_checked: int
    lower: dict[int, list[float]]
    upper: dict[int, list[int]]

    def level_basis(self, n: int) -> list[GroupoidElement]:
        return [e for level in self.basis[: n + 1] for e in level]


def _c(language: FactorLanguage, n: int) -> int:
    return 1 if n <= 0 else language.c(n)


def sandwich_bounds(language: FactorLanguage, n: int, C: int) -> tuple[Fraction, int]:
    """(n/C) c(floor(n/C)) and C n c(C n)."""
    lower = Fraction(n, C) * _c(language, n // C)
    upper = C * n * _c(language, C * n)
    return lower, upper


def filtration_growth(
    language: FactorLanguage,
    N: int,
    field: Field = QQ,
    C_max: int = 16,
    budget: int = 200_000,
) -> FiltrationGrowth:
    """Breadth-first enumeration of the generator filtration with exact ranks.

    Level n is spanned by level n-1 and the products g * e with g a generator
    and e a basis element that first appeared at level n-1.  ``budget`` caps
    the number of candidate products.  The sandwich constant is the smallest
    integer C <= C_max (limited by the language horizon) with
    (n/C) c(n/C) <= dim <= C n c(C n) for all 1 <= n <= N.
    """
    shift = Subshift(language)
    if 2 * N + 1 > language.horizon:
        raise InsufficientPrefix(f"need a language horizon of at least {2 * N + 1}")
    gens = shift.generators()[1:]
    vec = Vectorizer(shift, N)
    ech = EchelonBasis(field)
    one = shift.one()
    ech.add(vec(one))
    levels = [[one]]
    dims = [1]
    spent = 0
    for n in range(1, N + 1):
        new = []
        for e in levels[-1]:
            for g in gens:
                spent += 1
                if spent > budget:
                    raise BudgetExceeded(f"candidate budget {budget} exhausted at level {n}")
                p = g * e
                if not p.is_zero() and ech.add(vec(p)):
                    new.append(p)
        levels.append(new)
        dims.append(len(ech))

    C_limit = min(C_max, language.horizon // N) if N else C_max
    found = None
    lower, upper = {}, {}
    for C in range(1, C_limit + 1):
        lo = [sandwich_bounds(language, n, C)[0] for n in range(1, N + 1)]
        up = [sandwich_bounds(language, n, C)[1] for n in range(1, N + 1)]
        lower[C], upper[C] = [float(x) for x in lo], up
        if found is None and all(lo[n - 1] <= dims[n] <= up[n - 1] for n in range(1, N + 1)):
            found = C
    return FiltrationGrowth(dims, levels, found, C_limit, lower, upper)


def truncated_center_check(growth: FiltrationGrowth, n: int, field: Field = QQ) -> int:
    """dim of {e in level n : e commutes with every generator} minus the scalars."""
    if n == 0:
        return 0
    basis = growth.level_basis(n)
    shift = basis[0].subshift
    gens = shift.generators()[1:]
    images = [[e * g - g * e for g in gens] for e in basis]
    R = max(x.max_coordinate() for row in images for x in row)
    vec = Vectorizer(shift, max(R, 1))
    rows = []
    for row in images:
        r = {}
        for tag, x in enumerate(row):
            r.update(vec(x, tag))
        rows.append(r)
    ech = EchelonBasis(field)
    for r in rows:
        ech.add(r)
    return len(basis) - len(ech) - 1


def phi_matches_monomial(alg: MonomialAlgebra, v: str) -> bool:
    """phi(v) vanishes exactly when v is zero in the monomial algebra."""
    shift = Subshift(alg.language)
    return shift.phi(v).is_zero() == (v not in alg.language)
