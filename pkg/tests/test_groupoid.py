"""Groupoid algebra tests.

The main oracle is a concrete representation: the algebra acts on vectors
indexed by positions i of a long sample of the subshift, T moves e_i to
e_{i+1} and D_a keeps e_i when the point at i has letter a at coordinate 0.
Canonical forms are evaluated in that representation and compared with
matrix products of the generators, which never touch the package's product.
"""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liegrowth.groupoid import (
    Bisection, CylinderPattern, Subshift, bisection_product, commutator_span_dim,
    filtration_growth, pattern_nonempty, phi_injectivity_check, phi_matches_monomial,
    sandwich_bounds, truncated_center_check,
)
from liegrowth.liecomm import commutator_dim
from liegrowth.linalg import QQ, Field
from liegrowth.words import fibonacci, thue_morse, factor_language

SAMPLE = 4000
LO, HI = 200, SAMPLE - 200  # interior positions where windows stay inside the sample


@pytest.fixture(scope="module")
def fib():
    lang = factor_language(fibonacci(), 24, 10_000)
    return Subshift(lang), fibonacci().prefix(SAMPLE)[::-1]


@pytest.fixture(scope="module")
def tm():
    lang = factor_language(thue_morse(), 24, 10_000)
    return Subshift(lang), thue_morse().prefix(SAMPLE)[::-1]


def represent(e, sample):
    """e -> {i: {j: coeff}} on interior positions, from the canonical form."""
    out = {}
    for i in range(LO, HI):
        col = {}
        for m, (lo, hi, cs) in e.blocks.items():
            key = sample[i + lo:i + hi + 1] if hi >= lo else ""
            c = cs.get(key, 0)
            if c:
                col[i + m] = col.get(i + m, 0) + c
        out[i] = {j: c for j, c in col.items() if c}
    return out


def apply_word(gens, sample, i):
    """Apply a generator word right-to-left to e_i directly."""
    vec = {i: 1}
    for g in reversed(gens):
        new = {}
        for j, c in vec.items():
            if g == "T":
                new[j + 1] = new.get(j + 1, 0) + c
            elif g == "Ti":
                new[j - 1] = new.get(j - 1, 0) + c
            elif sample[j] == g:
                new[j] = new.get(j, 0) + c
        vec = {j: c for j, c in new.items() if c}
    return vec


def build(shift, gens):
    table = {"T": shift.T(1), "Ti": shift.T(-1), "0": shift.D("0"), "1": shift.D("1")}
    e = shift.one()
    for g in gens:
        e = e * table[g]
    return e


def test_pattern_nonempty_examples(fib, tm):
    assert not pattern_nonempty(CylinderPattern.of({0: "0", 1: "0", 2: "0"}), tm[0].language)
    assert pattern_nonempty(CylinderPattern(), tm[0].language)
    assert pattern_nonempty(CylinderPattern.of({0: "0", 2: "0"}), fib[0].language)


def test_bisection_product_examples(fib):
    shift = fib[0]
    one = bisection_product(Bisection(1), Bisection(-1))
    assert one == Bisection(0, CylinderPattern())
    dx, dy = Bisection(0, CylinderPattern.of({0: "0"})), Bisection(0, CylinderPattern.of({0: "1"}))
    assert bisection_product(dx, dy) is None
    assert bisection_product(dx, dx) == dx
    # 11 is not a factor of the Fibonacci word: D_y T D_y T is empty in the subshift
    dyT = Bisection(1, CylinderPattern.of({1: "1"}))
    assert bisection_product(dyT, dyT) is not None
    assert bisection_product(dyT, dyT, shift) is None


def test_partition_and_unit_identities(fib, tm):
    for shift, _ in (fib, tm):
        one = shift.one()
        assert shift.D("0") + shift.D("1") == one
        assert shift.T(1) * shift.T(-1) == one == shift.T(-1) * shift.T(1)
        assert shift.D("0") * shift.D("0") == shift.D("0")
        assert (shift.D("0") * shift.D("1")).is_zero()
        for g in shift.generators():
            assert one * g == g == g * one
        assert shift.phi("0") + shift.phi("1") == shift.T(1)


def test_phi_examples(fib, tm):
    assert (tm[0].phi("000")).is_zero()
    assert fib[0].phi("") == fib[0].one()
    e = fib[0].phi("00")
    assert e.shifts == [2]
    (line,) = e.dump().splitlines()
    m, window, word, coeff = [s.strip() for s in line.split("|")]
    assert m == "2" and word == "00" and coeff == "1"
    assert window.startswith("window [")


@pytest.mark.parametrize("length", [1, 2, 3, 4, 5])
def test_generator_products_match_representation(fib, length):
    shift, sample = fib
    for gens in itertools.product(["0", "1", "T", "Ti"], repeat=length):
        if length >= 4 and random.Random(",".join(gens)).random() < 0.7:
            continue
        e = build(shift, gens)
        rep = represent(e, sample)
        for i in range(LO, HI, 37):
            assert rep[i] == apply_word(gens, sample, i), gens


def test_phi_multiplicative_exhaustive(fib, tm):
    for shift, _ in (fib, tm):
        words = ["0", "1"]
        for n in range(2, 8):
            words += ["".join(p) for p in itertools.product("01", repeat=n)]
        images = {v: shift.phi(v) for v in words}
        for u in words:
            for v in words:
                if len(u) + len(v) > 8:
                    continue
                uv = images.get(u + v) or shift.phi(u + v)
                assert (images[u] * images[v]).same_form(uv)


def test_phi_zero_iff_not_factor(fib, tm):
    from liegrowth.monomial import MonomialAlgebra

    for shift, _ in (fib, tm):
        alg = MonomialAlgebra(shift.language)
        for n in range(1, 8):
            for p in itertools.product("01", repeat=n):
                v = "".join(p)
                assert phi_matches_monomial(alg, v)
                e = shift.phi(v)
                if not e.is_zero():
                    assert e.shifts == [n]


def test_phi_injectivity(fib, tm):
    for n in range(0, 9):
        assert phi_injectivity_check(fib[0].language, n)
    for n in range(1, 7):
        assert phi_injectivity_check(tm[0].language, n)


def test_canonicalize_idempotent_and_associative(tm):
    shift, sample = tm
    rng = random.Random(7)
    gens = shift.generators()
    for _ in range(40):
        a, b, c = (sum((rng.choice([1, -2, 3]) * x for x in rng.sample(gens, 2)), shift.zero())
                   * rng.choice(gens) for _ in range(3))
        assert a.canonicalize().same_form(a)
        assert ((a * b) * c).same_form(a * (b * c))
        assert (a * (b + c)).same_form(a * b + a * c)
        assert represent(a * b, sample)[1000] == _compose(represent(a, sample), represent(b, sample), 1000)


def _compose(ra, rb, i):
    out = {}
    for j, c in rb[i].items():
        for k, d in ra[j].items():
            out[k] = out.get(k, 0) + c * d
    return {k: v for k, v in out.items() if v}


def test_commutator_compatibility(fib, tm):
    from liegrowth.monomial import MonomialAlgebra

    for shift, _ in (fib, tm):
        alg = MonomialAlgebra(shift.language)
        for n in range(1, 7):
            assert commutator_span_dim(shift.language, n) == commutator_dim(alg, n)


def test_filtration_growth_fibonacci():
    lang = factor_language(fibonacci(), 80, 10_000)
    g = filtration_growth(lang, 10)
    assert g.dims[0] == 1 and g.dims[1] <= 5
    assert all(a < b for a, b in zip(g.dims, g.dims[1:]))
    assert g.sandwich_C is not None and g.sandwich_C <= 8
    C = g.sandwich_C
    for n in range(1, 11):
        lo, hi = sandwich_bounds(lang, n, C)
        assert lo <= g.dims[n] <= hi
    assert [truncated_center_check(g, n) for n in range(0, 7)] == [0] * 7
    mod = filtration_growth(lang, 6, Field(32003))
    assert mod.dims == g.dims[:7]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(["0", "1", "T", "Ti"]), min_size=1, max_size=6))
def test_random_products_match_representation(gens):
    lang = factor_language(thue_morse(), 24, 10_000)
    shift = Subshift(lang)
    sample = thue_morse().prefix(SAMPLE)[::-1]
    e = build(shift, gens)
    rep = represent(e, sample)
    for i in range(LO, HI, 101):
        assert rep[i] == apply_word(gens, sample, i)
