import random

import pytest

from axial.automaton import (
    build_window_graph,
    candidate_set_letters,
    forbidden_fit,
    is_independently_legal,
    _trim,
)
from axial.core import (
    EmptyLanguageError,
    WorkCaps,
    WorkCapExceeded,
    validate_spec,
)
from axial.models import coloring, full_shift, hard_square, plastic, words_model
from axial.optimize import max_mean_cycle
from axial.core import score_compare

from _support import brute_extendable, spec_zoo, sw


ADD = words_model([chr(ord("A") + i) for i in range(26)], ["ADD"])


# --- candidate set-letters ---------------------------------------------------

def test_candidates_add():
    masks = candidate_set_letters(ADD)
    a, d = ADD.alphabet.index("A"), ADD.alphabet.index("D")
    full = ADD.alphabet.full_mask
    free = full & ~(1 << a) & ~(1 << d)
    assert sorted(masks) == sorted({free, full & ~(1 << a), full & ~(1 << d), full})


def test_candidates_hard_square():
    spec = hard_square()
    assert candidate_set_letters(spec) == [0b01, 0b11]


def test_candidates_full_shift_single():
    spec = validate_spec(["a", "b", "c"], [])
    assert candidate_set_letters(spec) == [0b111]


def test_candidates_drop_empty_union():
    # all letters constrained: the empty subset union disappears
    assert len(candidate_set_letters(coloring(3))) == 2 ** 3 - 1


def test_candidates_cap():
    with pytest.raises(WorkCapExceeded):
        candidate_set_letters(coloring(3), caps=WorkCaps(candidates=4))


# --- legality ----------------------------------------------------------------

def test_legal_hard_square_word():
    spec = hard_square()
    assert is_independently_legal(sw(spec, "01", "0", "01"), spec).legal


def test_illegal_hard_square_word_with_witness():
    spec = hard_square()
    report = is_independently_legal(sw(spec, "01", "01", "0"), spec)
    assert not report.legal
    selection, offset, word = report.witness
    assert selection == (1, 1, 0) and offset == 0 and word == (1, 1)


def test_plastic_locally_legal_but_not_extendable():
    spec = plastic()
    w = sw(spec, "1", "23")
    assert is_independently_legal(w, spec, "local").legal
    report = is_independently_legal(w, spec, "extendable")
    assert not report.legal and report.reason == "not extendable" and report.witness is None


def test_extendable_short_words():
    spec = hard_square()
    assert is_independently_legal(sw(spec, "1"), spec, "extendable").legal
    assert is_independently_legal(sw(spec, "01"), spec, "extendable").legal
    assert not is_independently_legal(sw(spec, "1", "1"), spec, "local").legal


def test_fit_scan_matches_selection_semantics():
    spec = hard_square()
    assert forbidden_fit(sw(spec, "01", "01"), spec.forbidden) is not None
    assert forbidden_fit(sw(spec, "01", "0"), spec.forbidden) is None


# --- window graph ------------------------------------------------------------

def test_hard_square_graph_exact():
    g = build_window_graph(hard_square())
    assert g.windows == ((0b01,), (0b11,))
    edges = sorted(g.edges())
    assert edges == [(0, 0, 0b01), (0, 1, 0b11), (1, 0, 0b01)]
    assert g.max_weight() == 2


def test_full_shift_graph_single_loop():
    g = build_window_graph(full_shift(2))
    assert g.k == 0
    assert g.windows == ((),)
    assert list(g.edges()) == [(0, 0, 0b11)]


def test_add_graph_shape():
    g = build_window_graph(ADD)
    assert g.num_vertices == 16 and g.num_edges == 56
    a, d = ADD.alphabet.index("A"), ADD.alphabet.index("D")
    full = ADD.alphabet.full_mask
    s3, s4 = full & ~(1 << d), full
    idx = g.window_index()
    assert ((idx[(s3, s4)], s4) not in g.edge_index
            or g.edge_index[(idx[(s3, s4)], s4)] != idx[(s4, s4)])
    # the spec's argument: selection "ADD" fits in (s3, s4, s4)
    assert (idx[(s3, s4)], s4) not in g.edge_index


def test_empty_language_detected_at_build_time():
    spec = validate_spec(["0"], ["0"])  # validates fine, language is empty
    with pytest.raises(EmptyLanguageError):
        build_window_graph(spec)


def test_vertex_cap():
    with pytest.raises(WorkCapExceeded):
        build_window_graph(ADD, caps=WorkCaps(vertices=8))


def test_trim_is_a_fixed_point():
    for spec in (hard_square(), plastic(), coloring(3), ADD):
        g = build_window_graph(spec)
        alive = _trim(g.num_vertices, list(g.edges()))
        assert alive == set(range(g.num_vertices))


def test_edge_weights_are_cell_sizes():
    for spec in (hard_square(), coloring(3), plastic()):
        g = build_window_graph(spec)
        for _, _, mask in g.edges():
            assert 1 <= mask.bit_count() <= spec.sigma


def test_dump_format():
    lines = build_window_graph(hard_square()).dump_lines(hard_square().alphabet)
    assert lines[0] == "vertex 0 {0}"
    assert "edge 0 1 2 {0,1}" in lines


def test_dump_k0_window_rendered_as_dash():
    lines = build_window_graph(full_shift(2)).dump_lines(full_shift(2).alphabet)
    assert lines[0] == "vertex 0 -"


# --- candidates vs exhaustive, extendability oracle --------------------------

@pytest.mark.parametrize("idx", range(0, 240, 24))
def test_candidate_graph_is_induced_subgraph_of_exhaustive(idx):
    spec = spec_zoo()[idx]
    try:
        gc = build_window_graph(spec, universe="candidates")
    except EmptyLanguageError:
        return
    ge = build_window_graph(spec, universe="exhaustive")
    windex = ge.window_index()
    assert all(w in windex for w in gc.windows)
    ge_pairs = {(ge.windows[u], ge.windows[v], m) for u, v, m in ge.edges()}
    for u, v, m in gc.edges():
        assert (gc.windows[u], gc.windows[v], m) in ge_pairs
    # every exhaustive edge between retained candidate windows is retained
    kept = set(gc.windows)
    for wu, wv, m in ge_pairs:
        if wu in kept and wv in kept and m in gc.universe:
            iu, iv = gc.window_index()[wu], gc.window_index()[wv]
            assert gc.edge_index.get((iu, m)) == iv
    s1, _ = max_mean_cycle(gc)
    s2, _ = max_mean_cycle(ge)
    assert score_compare(s1, s2) == 0


def test_extendable_matches_bruteforce_oracle():
    rng = random.Random(20260810)
    specs = [spec_zoo()[i] for i in range(0, 240, 16)]
    checked = 0
    for spec in specs:
        for _ in range(12):
            n = rng.randint(1, 5)
            cells = tuple(rng.randint(1, (1 << spec.sigma) - 1) for _ in range(n))
            got = is_independently_legal(cells, spec, "extendable").legal
            want = brute_extendable(spec, cells)
            assert got == want, (spec.describe(), cells)
            checked += 1
    assert checked >= 150