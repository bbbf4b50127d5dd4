"""Alphabets, forbidden-word lists, set-words and exact entropy scores.

Everything downstream works with letter *indices* (0..sigma-1) and with
set-letters encoded as nonzero bitmasks over those indices, so that a
set-letter fits in one machine word (alphabet size is capped at 64).
Entropy-like quantities are carried around exactly as pairs (p, n)
meaning (1/n)*log(p); comparisons cross-power big integers and never
go through floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

MAX_ALPHABET = 64
DEFAULT_MAX_FORBIDDEN_LEN = 8


class SpecError(ValueError):
    """An alphabet / forbidden-word description is invalid."""


class EmptyLanguageError(SpecError):
    """The described shift space has no bi-infinite points at all."""


class WorkCapExceeded(RuntimeError):
    """A computation would exceed its configured work cap."""


@dataclass(frozen=True)
class WorkCaps:
    """Configurable resource limits, shared by the graph and counting code.

    sites      -- max number of box sites for per-site backtracking
    nodes      -- max node expansions / raw enumeration size
    vertices   -- max window-graph (or transfer-state) vertex count
    candidates -- max size of the candidate set-letter universe
    transfer_n -- max strip width for the 2D transfer-matrix counter
    """

    sites: int = 24
    nodes: int = 10**9
    vertices: int = 10**6
    candidates: int = 1 << 20
    transfer_n: int = 12


DEFAULT_CAPS = WorkCaps()


# ---------------------------------------------------------------------------
# Alphabet and set-letter helpers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Alphabet:
    """An ordered tuple of distinct display symbols, referenced by index."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not 1 <= len(self.symbols) <= MAX_ALPHABET:
            raise SpecError(f"alphabet size must be in 1..{MAX_ALPHABET}, got {len(self.symbols)}")
        if len(set(self.symbols)) != len(self.symbols):
            dupes = sorted({s for s in self.symbols if self.symbols.count(s) > 1})
            raise SpecError(f"duplicate symbols in alphabet: {dupes}")
        if any(not s for s in self.symbols):
            raise SpecError("empty string is not a valid symbol")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise SpecError(f"unknown symbol {symbol!r}") from None

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def mask_of(self, symbols) -> int:
        mask = 0
        for s in symbols:
            mask |= 1 << self.index(s)
        if mask == 0:
            raise SpecError("set-letters must be nonempty")
        return mask

    def letters_of(self, mask: int) -> tuple[int, ...]:
        return tuple(i for i in range(self.size) if mask >> i & 1)

    def set_letter_str(self, mask: int) -> str:
        return "{" + ",".join(self.symbols[i] for i in self.letters_of(mask)) + "}"

    def set_word_str(self, masks) -> str:
        return "".join(self.set_letter_str(m) for m in masks)

    def word_str(self, letters) -> str:
        return "".join(self.symbols[i] for i in letters)


def mask_size(mask: int) -> int:
    """Number of letters in a set-letter."""
    return mask.bit_count()


def mask_bits(mask: int) -> tuple[int, ...]:
    bits = []
    while mask:
        low = mask & -mask
        bits.append(low.bit_length() - 1)
        mask ^= low
    return tuple(bits)


def check_set_word(cells, sigma: int) -> tuple[int, ...]:
    """Validate a sequence of set-letter masks against an alphabet size."""
    cells = tuple(cells)
    if not cells:
        raise SpecError("set-words must be nonempty")
    full = (1 << sigma) - 1
    for m in cells:
        if not isinstance(m, int) or m <= 0 or m & ~full:
            raise SpecError(f"invalid set-letter mask {m!r} for alphabet of size {sigma}")
    return cells


# ---------------------------------------------------------------------------
# Subshift specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubshiftSpec:
    """An alphabet plus a minimized list of forbidden words (letter tuples).

    The forbidden list is antichain-reduced (no word contains another as a
    subword) and sorted, so equal shift spaces built from redundant lists
    compare equal. `memory` is the usual step size: max forbidden length
    minus one, and 0 for a full shift.
    """

    alphabet: Alphabet
    forbidden: tuple[tuple[int, ...], ...]

    @property
    def sigma(self) -> int:
        return self.alphabet.size

    @property
    def memory(self) -> int:
        return max((len(f) for f in self.forbidden), default=1) - 1 if self.forbidden else 0

    @property
    def constrained_mask(self) -> int:
        mask = 0
        for f in self.forbidden:
            for a in f:
                mask |= 1 << a
        return mask

    def describe(self) -> str:
        words = ",".join(self.alphabet.word_str(f) for f in self.forbidden)
        return f"<spec sigma={self.sigma} forbidden=[{words}]>"


def _is_subword(needle, haystack) -> bool:
    n, h = len(needle), len(haystack)
    return any(haystack[i:i + n] == needle for i in range(h - n + 1))


def _minimize_forbidden(words):
    """Drop every forbidden word that contains a shorter forbidden word."""
    words = sorted(set(words), key=lambda w: (len(w), w))
    kept = []
    for w in words:
        if not any(_is_subword(k, w) for k in kept):
            kept.append(w)
    return tuple(kept)


def validate_spec(symbols, forbidden, max_forbidden_len: int = DEFAULT_MAX_FORBIDDEN_LEN) -> SubshiftSpec:
    """Build a SubshiftSpec from raw symbols and forbidden words.

    `forbidden` entries may be strings (split into one-character symbols) or
    sequences of symbol strings (needed when symbols are multi-character,
    e.g. the beach model's "-3"). Emptiness of the resulting language is not
    decided here; it surfaces when the window graph is first built.
    """
    alphabet = Alphabet(tuple(symbols))
    mapped = []
    for entry in forbidden:
        if isinstance(entry, str):
            syms = tuple(entry)
        else:
            syms = tuple(entry)
        if not syms:
            raise SpecError("forbidden words must be nonempty")
        if len(syms) > max_forbidden_len:
            raise SpecError(
                f"forbidden word of length {len(syms)} exceeds the cap {max_forbidden_len}")
        mapped.append(tuple(alphabet.index(s) for s in syms))
    return SubshiftSpec(alphabet, _minimize_forbidden(mapped))


def spec_from_json_dict(doc: dict, max_forbidden_len: int = DEFAULT_MAX_FORBIDDEN_LEN) -> SubshiftSpec:
    """Read the model-file schema: {"alphabet": [...], "forbidden": [...]}."""
    if not isinstance(doc, dict) or "alphabet" not in doc:
        raise SpecError("model file must be an object with an 'alphabet' field")
    alphabet = doc["alphabet"]
    forbidden = doc.get("forbidden", [])
    if not isinstance(alphabet, list) or not all(isinstance(s, str) for s in alphabet):
        raise SpecError("'alphabet' must be an array of strings")
    if not isinstance(forbidden, list):
        raise SpecError("'forbidden' must be an array")
    return validate_spec(alphabet, forbidden, max_forbidden_len=max_forbidden_len)


# ---------------------------------------------------------------------------
# Exact scores: (1/n) * log(p)
# ---------------------------------------------------------------------------

def _iroot(x: int, e: int) -> int:
    """Floor of the e-th root of a nonnegative integer (Newton on ints)."""
    if x < 0 or e < 1:
        raise ValueError("iroot needs x >= 0, e >= 1")
    if e == 1 or x < 2:
        return x
    if e == 2:
        return math.isqrt(x)
    r = 1 << -(-x.bit_length() // e)  # upper bound on the root
    while True:
        nr = ((e - 1) * r + x // r ** (e - 1)) // e
        if nr >= r:
            return r
        r = nr


def _perfect_root(x: int, e: int):
    r = _iroot(x, e)
    return r if r ** e == x else None


@dataclass(frozen=True)
class ExactScore:
    """The value (1/n)*log(p) for a big integer p >= 1 and period n >= 1.

    Canonical form takes n minimal: no proper divisor n' of n admits an
    integer q with q^(n/n') = p. Scores are compared exactly (cross-powered
    integers); floats appear only in display helpers.
    """

    p: int
    n: int

    def __post_init__(self):
        if self.p < 1 or self.n < 1:
            raise SpecError(f"scores need p >= 1 and n >= 1, got ({self.p}, {self.n})")

    @classmethod
    def of(cls, p: int, n: int) -> "ExactScore":
        return canonicalize_score(cls(p, n))

    @classmethod
    def zero(cls) -> "ExactScore":
        return cls(1, 1)

    @property
    def is_zero(self) -> bool:
        return self.p == 1

    @property
    def nats(self) -> float:
        return math.log(self.p) / self.n

    def in_base(self, base: float) -> float:
        return self.nats / math.log(base)

    def __str__(self):
        if self.p == 1:
            return "0"
        if self.n == 1:
            return f"log({self.p})"
        return f"(1/{self.n})*log({self.p})"


def canonicalize_score(score: ExactScore) -> ExactScore:
    """Value-preserving reduction to the minimal-n form."""
    p, n = score.p, score.n
    if p == 1:
        return ExactScore(1, 1)
    for e in sorted(_divisors(n), reverse=True):
        if e == 1:
            break
        root = _perfect_root(p, e)
        if root is not None:
            return ExactScore(root, n // e)
    return ExactScore(p, n)


def _divisors(n: int):
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return out


def compare_log_means(p1, n1: int, p2, n2: int) -> int:
    """Sign of (1/n1)*log(p1) - (1/n2)*log(p2); p's are ints or Fractions > 0."""
    g = math.gcd(n1, n2)
    e1, e2 = n2 // g, n1 // g
    if isinstance(p1, int) and isinstance(p2, int):
        a, b = p1 ** e1, p2 ** e2
    else:
        a, b = Fraction(p1) ** e1, Fraction(p2) ** e2
    return (a > b) - (a < b)


def score_compare(a: ExactScore, b: ExactScore) -> int:
    """-1, 0 or +1; exact, and valid on non-canonical inputs."""
    return compare_log_means(a.p, a.n, b.p, b.n)


def independence_score(cells) -> ExactScore:
    """Exact average of log set-letter sizes over a set-word: (prod |cell|, len)."""
    cells = tuple(cells)
    if not cells:
        raise SpecError("set-words must be nonempty")
    p = 1
    for m in cells:
        p *= mask_size(m)
    return ExactScore.of(p, len(cells))
