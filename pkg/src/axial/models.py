"""Built-in model constructors and the text model syntax.

Covers every shift space the toolkit ships with: full shifts, the
hard-square (golden mean) shift, n-colorings, the beach model,
run-length limited shifts, the "plastic" three-letter shift (positive
1D entropy, zero independence entropy), and free-form forbidden-word
models loaded from JSON files.

For the record, two classical non-SFT examples are out of reach of this
toolkit by design (finite forbidden lists only): the even shift (whose
independence entropy is 0) and the Dyck shift on M bracket types (whose
independence entropy is log M).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core import (
    DEFAULT_MAX_FORBIDDEN_LEN,
    SpecError,
    SubshiftSpec,
    spec_from_json_dict,
    validate_spec,
)


@dataclass(frozen=True)
class ModelDescriptor:
    name: str
    args: tuple = ()


def parse_model(text: str) -> ModelDescriptor:
    """Parse the CLI model syntax.

    hard_square | plastic | full:S | coloring:N | beach:M |
    rll:D,K (K an integer or "inf") | file:path.json
    """
    if text in ("hard_square", "plastic"):
        return ModelDescriptor(text)
    head, sep, rest = text.partition(":")
    if not sep:
        raise SpecError(f"unknown model {text!r}")
    if head == "file":
        return ModelDescriptor("file", (rest,))
    if head in ("full", "coloring", "beach"):
        try:
            return ModelDescriptor(head, (int(rest),))
        except ValueError:
            raise SpecError(f"model {head} needs an integer parameter, got {rest!r}") from None
    if head == "rll":
        parts = rest.split(",")
        if len(parts) != 2:
            raise SpecError("rll model syntax is rll:D,K with K an integer or inf")
        try:
            d = int(parts[0])
            k = None if parts[1] in ("inf", "oo") else int(parts[1])
        except ValueError:
            raise SpecError(f"bad rll parameters {rest!r}") from None
        return ModelDescriptor("rll", (d, k))
    raise SpecError(f"unknown model {text!r}")


def full_shift(sigma: int) -> SubshiftSpec:
    if sigma < 1:
        raise SpecError("full shift needs at least one symbol")
    symbols = [str(i) for i in range(sigma)] if sigma <= 10 else \
        [chr(ord("A") + i) for i in range(sigma)] if sigma <= 26 else \
        [f"s{i}" for i in range(sigma)]
    return validate_spec(symbols, [])


def hard_square() -> SubshiftSpec:
    return validate_spec(["0", "1"], ["11"])


def coloring(n: int) -> SubshiftSpec:
    if n < 2:
        raise SpecError("colorings need n >= 2")
    symbols = [str(i) for i in range(1, n + 1)]
    return validate_spec(symbols, [[s, s] for s in symbols])


def beach(m: int) -> SubshiftSpec:
    """Alphabet {-M..-1, 1..M}; adjacent letters must have product >= -1."""
    if m < 1:
        raise SpecError("beach model needs M >= 1")
    values = list(range(-m, 0)) + list(range(1, m + 1))
    symbols = [str(v) for v in values]
    forbidden = [
        [str(a), str(b)]
        for a in values
        for b in values
        if a * b <= -2
    ]
    return validate_spec(symbols, forbidden)


def rll(d: int, k: int | None) -> SubshiftSpec:
    """Binary sequences whose maximal runs of 0s have length in [d, k]."""
    if d < 0 or (k is not None and k <= d):
        raise SpecError("rll needs 0 <= d < k")
    forbidden = ["1" + "0" * j + "1" for j in range(d)]
    if k is not None:
        forbidden.append("0" * (k + 1))
    cap = max(DEFAULT_MAX_FORBIDDEN_LEN, (k + 1) if k is not None else 0, d + 2)
    return validate_spec(["0", "1"], forbidden, max_forbidden_len=cap)


def plastic() -> SubshiftSpec:
    """Transitions 1->2, 1->3, 2->3, 3->1: entropy log(1.3247...), h_ind = 0."""
    return validate_spec(["1", "2", "3"], ["11", "21", "22", "32", "33"])


def words_model(symbols, forbidden) -> SubshiftSpec:
    return validate_spec(symbols, forbidden)


def model_from_file(path: str) -> SubshiftSpec:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return spec_from_json_dict(doc)


def build_model(desc) -> SubshiftSpec:
    """Build the spec for a ModelDescriptor or a CLI model string."""
    if isinstance(desc, str):
        desc = parse_model(desc)
    name, args = desc.name, desc.args
    if name == "full":
        return full_shift(*args)
    if name == "hard_square":
        return hard_square()
    if name == "coloring":
        return coloring(*args)
    if name == "beach":
        return beach(*args)
    if name == "rll":
        return rll(*args)
    if name == "plastic":
        return plastic()
    if name == "words":
        return words_model(*args)
    if name == "file":
        return model_from_file(*args)
    raise SpecError(f"unknown model {name!r}")


def builtin_zoo():
    """Named specs covering every built-in constructor, for sweep tests."""
    zoo = [
        ("full:1", full_shift(1)),
        ("full:2", full_shift(2)),
        ("full:3", full_shift(3)),
        ("hard_square", hard_square()),
        ("coloring:3", coloring(3)),
        ("coloring:4", coloring(4)),
        ("coloring:5", coloring(5)),
        ("beach:1", beach(1)),
        ("beach:2", beach(2)),
        ("beach:3", beach(3)),
        ("rll:1,3", rll(1, 3)),
        ("rll:2,5", rll(2, 5)),
        ("rll:1,inf", rll(1, None)),
        ("rll:2,inf", rll(2, None)),
        ("rll:3,inf", rll(3, None)),
        ("plastic", plastic()),
    ]
    return zoo
