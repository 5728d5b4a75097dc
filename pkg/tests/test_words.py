import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import iterate_substitution, oracle_factors
from liegrowth.words import (
    Alphabet, ConfigurationError, ExplicitWord, InsufficientPrefix, LIBRARY,
    SubstitutionWord, biinfinite_extend, BiInfiniteWord, constant, factor_language,
    fibonacci, periodic, recurrence_constant, sigma_bound_check, sigma_image,
    sigma_reduce, thue_morse, tribonacci, word_from_spec,
)

FIB = {"0": "01", "1": "0"}
TM = {"0": "01", "1": "10"}


def test_prefix_examples():
    assert fibonacci().prefix(6) == "010010"
    assert thue_morse().prefix(8) == "01101001"
    assert fibonacci().prefix(0) == ""


@pytest.mark.parametrize("name", sorted(LIBRARY))
def test_prefix_is_monotone(name):
    src = LIBRARY[name]()
    long = src.prefix(500)
    for n in (0, 1, 7, 64, 333):
        assert long.startswith(src.prefix(n))


def test_prefix_matches_independent_iteration():
    assert fibonacci().prefix(3000) == iterate_substitution(FIB, "0", 3000)
    assert thue_morse().prefix(3000) == iterate_substitution(TM, "0", 3000)


def test_not_prolongable_is_configuration_error():
    with pytest.raises(ConfigurationError):
        SubstitutionWord({"0": "10", "1": "0"}, "0")
    with pytest.raises(ConfigurationError):
        SubstitutionWord({"0": "0", "1": "1"}, "0")


def test_alphabet_rejects_duplicates():
    with pytest.raises((ConfigurationError, ValueError)):
        Alphabet(("0", "0"))


def test_factor_language_examples():
    fib = factor_language(fibonacci(), 3, 100)
    assert [fib.c(n) for n in (1, 2, 3)] == [2, 3, 4]
    tm = factor_language(thue_morse(), 4, 200)
    assert tm.complexity == [2, 4, 6, 10]
    const = factor_language(constant("0"), 5, 10)
    assert const.complexity == [1] * 5


def test_factor_language_requires_L_at_least_N():
    with pytest.raises(ValueError):
        factor_language(fibonacci(), 10, 5)


def test_factor_sets_match_oracle(tm_lang):
    text = iterate_substitution(TM, "0", 10_000)
    for n in range(1, 21):
        assert set(tm_lang.words(n)) == oracle_factors(text, n)


def test_language_invariants(fib_lang, tm_lang, chacon_lang):
    for lang in (fib_lang, tm_lang, chacon_lang):
        d = lang.alphabet.d
        for n in range(1, lang.horizon):
            assert lang.c(n) <= lang.c(n + 1) <= d * lang.c(n)
            for w in lang.words(n + 1):
                assert w[:-1] in lang and w[1:] in lang


def test_library_words_are_stable(fib_lang, tm_lang, chacon_lang):
    for lang in (fib_lang, tm_lang, chacon_lang):
        assert all(lang.is_stable(n) for n in range(1, lang.horizon + 1))


def test_disk_cache_round_trip(tmp_path):
    a = factor_language(fibonacci(), 12, 500, cache_dir=tmp_path)
    files = list(tmp_path.glob("factors-*.json"))
    assert len(files) == 1
    assert json.loads(files[0].read_text())["version"] == 1
    b = factor_language(fibonacci(), 12, 500, cache_dir=tmp_path)
    assert a.factors == b.factors and a.stable == b.stable


def test_recurrence_constant_examples():
    assert recurrence_constant(fibonacci(), "0", 1000) == 2
    text = fibonacci().prefix(50)
    assert recurrence_constant(fibonacci(), text, 50, confirm=False) == 50


def test_recurrence_constant_absent_for_growing_gaps():
    # 0100100010000...: the gaps between 1s grow
    ones = {k * (k + 3) // 2 for k in range(1, 200)}
    src = ExplicitWord(lambda i: "1" if i in ones else "0", alphabet="01", name="growing-gaps")
    assert recurrence_constant(src, "1", 2000) is None


def test_recurrence_constant_rejects_non_factor(tm_lang):
    with pytest.raises(ValueError):
        recurrence_constant(thue_morse(), "000", 1000, lang=tm_lang)


def test_sigma_examples():
    abc = Alphabet(("a", "b", "c"))
    # x2 x1 x3 -> xyy . xy . xyyy
    assert sigma_image("bac", abc) == "011" + "01" + "0111"
    assert sigma_reduce(constant("a")).prefix(8) == "01010101"


def test_sigma_prefix_consistent():
    s = sigma_reduce(tribonacci())
    assert s.prefix(300) == sigma_image(tribonacci().prefix(200), tribonacci().alphabet)[:300]


def test_sigma_bounds_fibonacci_to_20():
    rows = sigma_bound_check(fibonacci(), 20, 10_000)
    assert all(r.ok for r in rows)


def test_sigma_preserves_uniform_recurrence():
    s = sigma_reduce(tribonacci())
    for u in ("0", "01", "011", "0101"):
        assert recurrence_constant(s, u, 5000) is not None


def test_biinfinite_fibonacci():
    approx = biinfinite_extend(fibonacci(), 3, 10_000)
    u1, u2, u3 = approx.u
    assert u1 in u2 and u2 in u3
    text = fibonacci().prefix(10_000)
    for n in range(1, len(u3) + 1):
        assert oracle_factors(u3, n) <= oracle_factors(text, n)
    for k, (p, q) in enumerate(zip(approx.p, approx.q)):
        assert len(p) == len(q) >= 1
        assert approx.u[k + 1] == p + approx.u[k] + q


def test_biinfinite_constant():
    approx = biinfinite_extend(constant("0"), 2, 10)
    assert approx.u[1] == "000" and approx.p == ["0"] and approx.q == ["0"]


def test_biinfinite_non_recurrent():
    src = ExplicitWord(lambda i: "0" if i == 0 else "1", alphabet="01", name="0111")
    with pytest.raises(InsufficientPrefix, match="insufficient prefix.*step 2"):
        biinfinite_extend(src, 2, 10 ** 6)


def test_biinfinite_word_windows_are_factors(fib_lang):
    w = BiInfiniteWord(fibonacci(), 10_000)
    for lo in (-20, -5, 0):
        seg = w.window(lo, lo + 9)
        assert seg in fib_lang


def test_word_from_spec():
    assert word_from_spec("periodic:01").prefix(5) == "01010"
    assert word_from_spec("subst:0=01,1=0@0").prefix(6) == "010010"
    assert word_from_spec("sigma:constant:a").prefix(4) == "0101"
    with pytest.raises(ConfigurationError):
        word_from_spec("nope")


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="01", min_size=1, max_size=6), st.integers(2, 12))
def test_periodic_complexity_bounded_by_period(block, n):
    lang = factor_language(periodic(block), n, 20 * len(block) + n)
    assert lang.c(n) <= len(block)
