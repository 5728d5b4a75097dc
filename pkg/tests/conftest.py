"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package: factor sets come from a
naive set comprehension over a hand-rolled substitution iteration, and
ranks come from sympy's dense ``Matrix.rank``.
"""

from __future__ import annotations

import pytest
import sympy

from liegrowth.linalg import QQ
from liegrowth.monomial import MonomialAlgebra
from liegrowth.words import chacon, factor_language, fibonacci, periodic, thue_morse


def iterate_substitution(rules: dict[str, str], seed: str, n: int) -> str:
    w = seed
    while len(w) < n:
        w = "".join(rules[a] for a in w)
    return w[:n]


def oracle_factors(text: str, n: int) -> set[str]:
    return {text[i:i + n] for i in range(len(text) - n + 1)}


def oracle_rank(rows: list[dict], columns: int) -> int:
    if not rows:
        return 0
    m = sympy.Matrix([[r.get(j, 0) for j in range(columns)] for r in rows])
    return m.rank()


@pytest.fixture(scope="session")
def fib_lang():
    return factor_language(fibonacci(), 32, 10_000)


@pytest.fixture(scope="session")
def tm_lang():
    return factor_language(thue_morse(), 32, 10_000)


@pytest.fixture(scope="session")
def chacon_lang():
    return factor_language(chacon(), 20, 10_000)


@pytest.fixture(scope="session")
def per_lang():
    return factor_language(periodic("01"), 20, 1_000)


@pytest.fixture(scope="session")
def fib_alg(fib_lang):
    return MonomialAlgebra(fib_lang, QQ)


@pytest.fixture(scope="session")
def tm_alg(tm_lang):
    return MonomialAlgebra(tm_lang, QQ)


@pytest.fixture(scope="session")
def per_alg(per_lang):
    return MonomialAlgebra(per_lang, QQ)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, text = results[k]
        terminalreporter.write_line(f"ACCEPTANCE {k} {'PASS' if ok else 'FAIL'} {text}")
