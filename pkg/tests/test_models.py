import json

import pytest

from axial.core import ExactScore, SpecError, score_compare
from axial.counting import entropy_1d
from axial.models import (
    ModelDescriptor,
    beach,
    build_model,
    builtin_zoo,
    coloring,
    full_shift,
    hard_square,
    parse_model,
    plastic,
    rll,
    words_model,
)
from axial.optimize import canonical_rotation, independence_entropy

from _support import letters


# --- construction ---------------------------------------------------------------

def test_hard_square_definition():
    spec = hard_square()
    assert spec.alphabet.symbols == ("0", "1")
    assert spec.forbidden == ((1, 1),)


def test_coloring_definition():
    spec = coloring(4)
    assert spec.forbidden == tuple((i, i) for i in range(4))


def test_beach2_forbidden_pairs_exact():
    spec = beach(2)
    pairs = {tuple(spec.alphabet.symbols[i] for i in f) for f in spec.forbidden}
    assert pairs == {("-2", "1"), ("1", "-2"), ("-2", "2"),
                     ("2", "-2"), ("-1", "2"), ("2", "-1")}
    assert "0" not in spec.alphabet.symbols
    assert spec.alphabet.symbols == ("-2", "-1", "1", "2")


def test_beach1_is_a_full_shift():
    assert beach(1).forbidden == ()


def test_rll_definitions():
    spec = rll(1, 3)
    assert set(spec.forbidden) == {letters(spec, "11"), letters(spec, "0000")}
    assert rll(1, None) == hard_square()
    assert rll(0, 1).forbidden == ((0, 0),)
    long = rll(3, 9)  # forbidden 0^10 passes the raised length cap
    assert max(len(f) for f in long.forbidden) == 10


def test_plastic_transitions():
    spec = plastic()
    allowed = {(a, b) for a in range(3) for b in range(3)
               if (a, b) not in spec.forbidden}
    assert allowed == {(0, 1), (0, 2), (1, 2), (2, 0)}  # 1->2,1->3,2->3,3->1


def test_words_model_is_a_passthrough():
    spec = words_model(["a", "b"], ["ab"])
    assert spec.forbidden == ((0, 1),)


def test_parameter_validation():
    for bad in (lambda: coloring(1), lambda: beach(0), lambda: rll(2, 2),
                lambda: rll(-1, 3), lambda: full_shift(0)):
        with pytest.raises(SpecError):
            bad()


# --- parsing ---------------------------------------------------------------------

def test_parse_model_syntax():
    assert parse_model("hard_square") == ModelDescriptor("hard_square")
    assert parse_model("plastic") == ModelDescriptor("plastic")
    assert parse_model("coloring:4") == ModelDescriptor("coloring", (4,))
    assert parse_model("beach:3") == ModelDescriptor("beach", (3,))
    assert parse_model("rll:1,3") == ModelDescriptor("rll", (1, 3))
    assert parse_model("rll:2,inf") == ModelDescriptor("rll", (2, None))
    assert parse_model("full:5") == ModelDescriptor("full", (5,))
    assert parse_model("file:m.json") == ModelDescriptor("file", ("m.json",))
    for bad in ("nonsense", "coloring:x", "rll:3", "rll:a,b", "beach:"):
        with pytest.raises(SpecError):
            parse_model(bad)


def test_build_model_from_file(tmp_path):
    path = tmp_path / "add.json"
    path.write_text(json.dumps(
        {"alphabet": [chr(ord("A") + i) for i in range(26)], "forbidden": ["ADD"]}))
    spec = build_model(f"file:{path}")
    assert spec.sigma == 26 and spec.memory == 2


# --- closed forms ------------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_coloring_closed_form(n):
    h, _ = independence_entropy(coloring(n))
    expected = ExactScore.of((n // 2) * ((n + 1) // 2), 2)
    assert score_compare(h, expected) == 0


def _rll_expected(d, k):
    if k is None:
        return ExactScore.of(2, d + 1)
    reps = (k - d) // (d + 1)
    return ExactScore.of(2 ** reps, ((k + 1) // (d + 1)) * (d + 1))


def _rll_expected_word(spec, d, k):
    zero, one = spec.alphabet.mask_of("0"), spec.alphabet.mask_of("1")
    both = zero | one
    if k is None:
        return canonical_rotation((zero,) * d + (both,))
    reps = (k - d) // (d + 1)
    return canonical_rotation((zero,) * d + (one,) + ((zero,) * d + (both,)) * reps)


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_rll_closed_forms(d):
    for k in list(range(d + 1, 10)) + [None]:
        spec = rll(d, k)
        h, cycle = independence_entropy(spec)
        assert score_compare(h, _rll_expected(d, k)) == 0, (d, k)
        if k is None or (k - d) // (d + 1) >= 1:
            # positive-entropy cases have the unique stated maximizing word
            assert cycle.word == _rll_expected_word(spec, d, k), (d, k)


def test_rll1inf_equals_hard_square_entropy():
    a, _ = independence_entropy(rll(1, None))
    b, _ = independence_entropy(hard_square())
    assert a == b == ExactScore(2, 2)


def test_plastic_zero_hind_positive_entropy():
    h, _ = independence_entropy(plastic())
    assert h == ExactScore(1, 1)
    assert entropy_1d(plastic()) > 0.28


def test_builtin_zoo_builds():
    zoo = builtin_zoo()
    assert len(zoo) >= 14
    for name, spec in zoo:
        assert build_model(name) == spec