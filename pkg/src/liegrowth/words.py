"""Infinite words, factor languages and complexity.

Words are plain ``str`` objects whose characters are alphabet letters.  An
infinite word is a :class:`WordSource`; only finite prefixes are ever
materialised, and every language computation records the prefix length it
was computed from.
"""

from __future__ import annotations

import hashlib
import json
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

CACHE_VERSION = 1
CACHE_ENV = "LIEGROWTH_CACHE_DIR"


class ConfigurationError(ValueError):
    """A word source was set up with inconsistent parameters."""


class InsufficientPrefix(RuntimeError):
    """The scanned prefix is too short for the requested computation."""


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise ConfigurationError("alphabet must contain at least one letter")
        if len(set(self.letters)) != len(self.letters):
            raise ConfigurationError(f"repeated letters in {self.letters!r}")
        if any(len(a) != 1 for a in self.letters):
            raise ConfigurationError("letters must be single characters")

    @property
    def d(self) -> int:
        return len(self.letters)

    def index(self, letter: str) -> int:
        return self.letters.index(letter)

    def __contains__(self, letter) -> bool:
        return letter in self.letters


BINARY = Alphabet(("0", "1"))


class WordSource(ABC):
    """A deterministic one-sided infinite word."""

    alphabet: Alphabet
    kind: str = "abstract"

    @abstractmethod
    def prefix(self, n: int) -> str:
        """First ``n`` letters of the word."""

    @abstractmethod
    def describe(self) -> str:
        """Stable textual description, used as a cache key."""

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()}>"


class SubstitutionWord(WordSource):
    """Fixed point of a substitution that is prolongable on ``seed``."""

    kind = "substitution-fixed-point"

    def __init__(self, rules: dict[str, str], seed: str, name: str | None = None):
        self.rules = dict(rules)
        self.seed = seed
        self.name = name
        self.alphabet = Alphabet(tuple(sorted(self.rules)))
        for a, img in self.rules.items():
            if not img:
                raise ConfigurationError(f"erasing rule for {a!r}")
            bad = set(img) - set(self.rules)
            if bad:
                raise ConfigurationError(f"rule for {a!r} uses undefined letters {sorted(bad)}")
        if seed not in self.rules:
            raise ConfigurationError(f"seed {seed!r} has no rule")
        img = self.rules[seed]
        if not (img.startswith(seed) and len(img) >= 2):
            raise ConfigurationError(
                f"substitution is not prolongable on {seed!r}: {seed!r} -> {img!r}"
            )
        self._table = str.maketrans(self.rules)
        self._word = seed

    def prefix(self, n: int) -> str:
        if n < 0:
            raise ValueError("prefix length must be non-negative")
        while len(self._word) < n:
            self._word = self._word.translate(self._table)
        return self._word[:n]

    def describe(self) -> str:
        rules = ",".join(f"{a}>{self.rules[a]}" for a in sorted(self.rules))
        return f"subst[{rules}]@{self.seed}"


class ExplicitWord(WordSource):
    """A word given by a literal prefix (optionally repeated) or a letter function.

    ``text`` is either a string or a callable ``i -> letter`` (0-indexed).
    A finite, non-periodic string only supports prefixes up to its length.
    """

    kind = "explicit-prefix"

    def __init__(
        self,
        text: str | Callable[[int], str],
        alphabet: Alphabet | Sequence[str] | None = None,
        periodic: bool = False,
        name: str | None = None,
    ):
        self.text = text
        self.periodic = periodic
        self.name = name
        if callable(text):
            if alphabet is None:
                raise ConfigurationError("a letter function needs an explicit alphabet")
            if name is None:
                raise ConfigurationError("a letter function needs a name for caching")
        elif not text:
            raise ConfigurationError("explicit word must be non-empty")
        if alphabet is None:
            alphabet = Alphabet(tuple(sorted(set(text))))
        elif not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        self.alphabet = alphabet
        self._buf = ""

    def prefix(self, n: int) -> str:
        if n < 0:
            raise ValueError("prefix length must be non-negative")
        if callable(self.text):
            if len(self._buf) < n:
                self._buf += "".join(self.text(i) for i in range(len(self._buf), n))
            return self._buf[:n]
        if self.periodic:
            reps = -(-n // len(self.text))
            return (self.text * reps)[:n]
        if n > len(self.text):
            raise InsufficientPrefix(
                f"explicit word has only {len(self.text)} letters, {n} requested"
            )
        return self.text[:n]

    def describe(self) -> str:
        if callable(self.text):
            return f"func[{self.name}]"
        tag = "periodic" if self.periodic else "explicit"
        return f"{tag}[{self.text}]"


def sigma_image(word: str, alphabet: Alphabet) -> str:
    """Apply x_i -> x y^i letterwise, with x = '0', y = '1' and x_i the i-th letter."""
    return "".join("0" + "1" * (alphabet.index(a) + 1) for a in word)


class SigmaWord(WordSource):
    """The binary word obtained from ``base`` by the substitution x_i -> x y^i."""

    kind = "composed(sigma)"

    def __init__(self, base: WordSource):
        self.base = base
        self.alphabet = BINARY

    def prefix(self, n: int) -> str:
        # every letter expands to at least two, so n base letters always suffice
        k = (n + 1) // 2
        return sigma_image(self.base.prefix(k), self.base.alphabet)[:n]

    def describe(self) -> str:
        return f"sigma({self.base.describe()})"


def sigma_reduce(source: WordSource) -> SigmaWord:
    return SigmaWord(source)


@dataclass
class SigmaBoundRow:
    n: int
    c: int  # c_w(n)
    c_prime_scaled: int  # c_{w'}((d+1) n)
    c_prime: int  # c_{w'}(n)
    upper: int  # (d+1)^2 * sum_{p=0}^{2d+2} c_w(n+p)

    @property
    def ok(self) -> bool:
        return self.c <= self.c_prime_scaled and self.c_prime <= self.upper


def sigma_bound_check(source: WordSource, n_max: int, L: int) -> list[SigmaBoundRow]:
    """Compare the complexities of ``source`` and its sigma image for n = 1..n_max."""
    d = source.alphabet.d
    base = factor_language(source, n_max + 2 * d + 2, L)
    image = factor_language(sigma_reduce(source), (d + 1) * n_max, (d + 1) * L)
    return [
        SigmaBoundRow(n, base.c(n), image.c((d + 1) * n), image.c(n),
                      (d + 1) ** 2 * sum(base.c(n + p) for p in range(2 * d + 3)))
        for n in range(1, n_max + 1)
    ]


# -- library of uniformly recurrent words ----------------------------------

def fibonacci() -> SubstitutionWord:
    return SubstitutionWord({"0": "01", "1": "0"}, "0", name="fibonacci")


def thue_morse() -> SubstitutionWord:
    return SubstitutionWord({"0": "01", "1": "10"}, "0", name="thue-morse")


def period_doubling() -> SubstitutionWord:
    return SubstitutionWord({"0": "01", "1": "00"}, "0", name="period-doubling")


def chacon() -> SubstitutionWord:
    return SubstitutionWord({"0": "0010", "1": "1"}, "0", name="chacon")


def tribonacci() -> SubstitutionWord:
    return SubstitutionWord({"0": "01", "1": "02", "2": "0"}, "0", name="tribonacci")


def periodic(pattern: str) -> ExplicitWord:
    return ExplicitWord(pattern, alphabet=BINARY if set(pattern) <= {"0", "1"} else None,
                        periodic=True, name=f"periodic-{pattern}")


def constant(letter: str = "0") -> ExplicitWord:
    return ExplicitWord(letter, periodic=True, name=f"constant-{letter}")


LIBRARY: dict[str, Callable[[], WordSource]] = {
    "fibonacci": fibonacci,
    "thue-morse": thue_morse,
    "period-doubling": period_doubling,
    "chacon": chacon,
    "tribonacci": tribonacci,
}


def word_from_spec(spec: str) -> WordSource:
    """Parse a source spec from the command line or a config file.

    Accepted forms: a library name, ``periodic:<block>``, ``explicit:<text>``,
    ``subst:<a>=<img>,<b>=<img>[@seed]`` and ``sigma:<inner spec>``.
    """
    spec = spec.strip()
    if spec in LIBRARY:
        return LIBRARY[spec]()
    kind, _, arg = spec.partition(":")
    if kind == "periodic" and arg:
        return periodic(arg)
    if kind == "constant" and arg:
        return constant(arg)
    if kind == "explicit" and arg:
        return ExplicitWord(arg)
    if kind == "sigma" and arg:
        return sigma_reduce(word_from_spec(arg))
    if kind == "subst" and arg:
        body, _, seed = arg.partition("@")
        rules = {}
        for item in body.split(","):
            a, _, img = item.partition("=")
            rules[a.strip()] = img.strip()
        return SubstitutionWord(rules, seed or next(iter(rules)))
    raise ConfigurationError(
        f"unknown word source {spec!r}; try one of {sorted(LIBRARY)} or periodic:<block>"
    )


# -- factor languages ---------------------------------------------------------

@dataclass
class FactorLanguage:
    """Length-n factors of a word for n = 1..horizon, scanned from a finite prefix.

    ``stable[n]`` is True when doubling the prefix length left F(n) unchanged
    (None when stability was not checked).
    """

    source: str
    alphabet: Alphabet
    horizon: int
    prefix_length: int
    factors: dict[int, tuple[str, ...]]
    stable: dict[int, bool] | None = None
    _sets: dict[int, frozenset] = field(default_factory=dict, repr=False, compare=False)

    def words(self, n: int) -> tuple[str, ...]:
        if n == 0:
            return ("",)
        self._check(n)
        return self.factors[n]

    def c(self, n: int) -> int:
        return len(self.words(n))

    @property
    def complexity(self) -> list[int]:
        return [len(self.factors[n]) for n in range(1, self.horizon + 1)]

    def __contains__(self, word: str) -> bool:
        n = len(word)
        if n == 0:
            return True
        self._check(n)
        s = self._sets.get(n)
        if s is None:
            s = self._sets[n] = frozenset(self.factors[n])
        return word in s

    def is_stable(self, n: int) -> bool:
        return bool(self.stable) and all(self.stable[k] for k in range(1, n + 1))

    def _check(self, n: int):
        if n > self.horizon:
            raise InsufficientPrefix(
                f"length {n} exceeds the language horizon {self.horizon}; rebuild with larger N"
            )


def _scan(word: str, N: int) -> dict[int, tuple[str, ...]]:
    out = {}
    for n in range(1, N + 1):
        out[n] = tuple(sorted({word[i:i + n] for i in range(len(word) - n + 1)}))
    return out


def _cache_dir(cache_dir) -> Path | None:
    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_ENV)
    return Path(cache_dir) if cache_dir else None


def factor_language(
    source: WordSource,
    N: int,
    L: int,
    check_stability: bool = True,
    cache_dir: str | os.PathLike | None = None,
) -> FactorLanguage:
    """All length-n windows of ``source.prefix(L)`` for n <= N.

    With ``check_stability`` the scan is repeated on a prefix of length 2L and
    each length is marked stable or not.  Results are cached on disk when
    ``cache_dir`` or ``$LIEGROWTH_CACHE_DIR`` is set.
    """
    if N < 1:
        raise ValueError("horizon N must be positive")
    if L < N:
        raise ValueError(f"prefix length L={L} is shorter than the horizon N={N}")
    desc = source.describe()
    cdir = _cache_dir(cache_dir)
    path = None
    if cdir is not None:
        key = hashlib.sha256(f"{desc}|{N}|{L}|{int(check_stability)}".encode()).hexdigest()[:24]
        path = cdir / f"factors-{key}.json"
        if path.exists():
            data = json.loads(path.read_text())
            if data.get("version") == CACHE_VERSION and data.get("source") == desc:
                return FactorLanguage(
                    source=desc,
                    alphabet=source.alphabet,
                    horizon=N,
                    prefix_length=L,
                    factors={int(k): tuple(v) for k, v in data["factors"].items()},
                    stable=({int(k): v for k, v in data["stable"].items()}
                            if data["stable"] is not None else None),
                )

    factors = _scan(source.prefix(L), N)
    stable = None
    if check_stability:
        try:
            longer = _scan(source.prefix(2 * L), N)
        except InsufficientPrefix:
            stable = {n: False for n in factors}
        else:
            stable = {n: longer[n] == factors[n] for n in factors}
    lang = FactorLanguage(desc, source.alphabet, N, L, factors, stable)

    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "version": CACHE_VERSION,
            "source": desc,
            "N": N,
            "L": L,
            "factors": {str(n): list(v) for n, v in factors.items()},
            "stable": None if stable is None else {str(n): v for n, v in stable.items()},
        }
        path.write_text(json.dumps(payload, sort_keys=True))
    return lang


def _window_constant(text: str, u: str) -> int | None:
    """Smallest C such that every length-C window of ``text`` contains ``u``."""
    k = len(u)
    occ = []
    i = text.find(u)
    while i >= 0:
        occ.append(i)
        i = text.find(u, i + 1)
    if not occ:
        return None
    C = occ[0] + k
    for a, b in zip(occ, occ[1:]):
        C = max(C, b - a + k - 1)
    C = max(C, len(text) - occ[-1])
    return C


def recurrence_constant(
    source: WordSource, u: str, L: int, lang: FactorLanguage | None = None,
    confirm: bool = True,
) -> int | None:
    """Smallest C such that every length-C window of the prefix of length L contains u.

    With ``confirm`` the value is recomputed on the prefix of length 2L and
    None is returned when it moves: a constant that keeps growing with the
    prefix is evidence against uniform recurrence.  None is never a proof.
    """
    if lang is not None and len(u) <= lang.horizon:
        if u not in lang:
            raise ValueError(f"{u!r} is not a factor of the word")
    text = source.prefix(L)
    C = _window_constant(text, u)
    if C is None:
        raise ValueError(f"{u!r} does not occur in the prefix of length {L}")
    if not confirm:
        return C
    C2 = _window_constant(source.prefix(2 * L), u)
    return C if C2 == C else None


# -- bi-infinite extension ----------------------------------------------------

@dataclass
class BiInfiniteApprox:
    """Nested prefixes u_1, ..., u_t with u_{k+1} = p_{k+1} u_k q_{k+1}.

    ``anchor`` is the 0-based position in ``u[-1]`` of the letter that plays
    the role of coordinate 0 of the bi-infinite word.  ``ls`` holds the
    1-based occurrence positions l_2, ..., l_t.
    """

    u: list[str]
    ls: list[int]
    p: list[str]
    q: list[str]
    anchor: int

    @property
    def center(self) -> str:
        return self.u[-1]

    def window(self, lo: int, hi: int) -> str:
        """Letters at bi-infinite coordinates lo..hi (inclusive)."""
        a, b = self.anchor + lo, self.anchor + hi
        if a < 0 or b >= len(self.center):
            raise InsufficientPrefix(f"window [{lo},{hi}] exceeds the constructed word")
        return self.center[a:b + 1]


def biinfinite_extend(source: WordSource, steps: int, L: int) -> BiInfiniteApprox:
    """Run the nested-prefix construction for ``steps`` stages.

    u_1 = w[1]; the first recurrence is the smallest l_2 >= 2, later ones the
    smallest l_{k+1} >= 2|u_k| + 1, and u_{k+1} = w[1, 2 l_{k+1} + |u_k| - 2].
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    text = source.prefix(L)
    u = [text[:1]]
    ls, ps, qs = [], [], []
    anchor = 0
    for step in range(2, steps + 1):
        cur = u[-1]
        c = len(cur)
        lmin = 2 if step == 2 else 2 * c + 1
        pos = text.find(cur, lmin - 1)
        if pos < 0 or 2 * (pos + 1) + c - 2 > len(text):
            raise InsufficientPrefix(
                f"insufficient prefix: u_{step - 1} (length {c}) does not recur "
                f"at position >= {lmin} within L={L} (step {step})"
            )
        l = pos + 1
        nxt = text[:2 * l + c - 2]
        ps.append(nxt[:l - 1])
        qs.append(nxt[l - 1 + c:])
        ls.append(l)
        anchor += l - 1
        u.append(nxt)
    return BiInfiniteApprox(u=u, ls=ls, p=ps, q=qs, anchor=anchor)


class BiInfiniteWord(WordSource):
    """Right half (coordinates 0, 1, 2, ...) of the bi-infinite twin of ``base``."""

    kind = "composed(bi-infinite)"

    def __init__(self, base: WordSource, L: int, steps: int = 2):
        self.base = base
        self.L = L
        self.steps = steps
        self.alphabet = base.alphabet
        self._approx = biinfinite_extend(base, steps, L)

    def _grow(self, need_lo: int, need_hi: int):
        while True:
            a = self._approx
            if a.anchor + need_lo >= 0 and a.anchor + need_hi < len(a.center):
                return
            self.steps += 1
            self._approx = biinfinite_extend(self.base, self.steps, self.L)

    def window(self, lo: int, hi: int) -> str:
        self._grow(lo, hi)
        return self._approx.window(lo, hi)

    def prefix(self, n: int) -> str:
        if n == 0:
            return ""
        return self.window(0, n - 1)

    def describe(self) -> str:
        return f"biinf({self.base.describe()},L={self.L})"
