"""Multi-choice window graphs and independent-legality checks.

A k-window over a set-letter universe is "fully legal" when no forbidden
word *fits* into it: word f fits at offset i iff f[j] is an element of
cell i+j for every j. A selection of one letter per cell contains a
forbidden word exactly when some forbidden word fits, so full legality is
a linear scan instead of an exponential selection sweep.

Vertices of the window graph are fully legal k-windows, edges are overlap
moves u -> u[1:]+c whose combined (k+1)-window is fully legal; each edge
carries the new cell and its cardinality as weight. Iterative trimming
removes vertices that cannot sit on a bi-infinite path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    DEFAULT_CAPS,
    EmptyLanguageError,
    SpecError,
    SubshiftSpec,
    WorkCaps,
    WorkCapExceeded,
    check_set_word,
    mask_bits,
    mask_size,
)


def forbidden_fit(cells, forbidden):
    """First (offset, word) such that the word fits into the cells, else None."""
    n = len(cells)
    for f in forbidden:
        lf = len(f)
        for i in range(n - lf + 1):
            if all(cells[i + j] >> f[j] & 1 for j in range(lf)):
                return i, f
    return None


def _fit_ending_at(cells, pos, forbidden):
    """Does some forbidden word fit into cells with its last letter at pos?"""
    for f in forbidden:
        i = pos - len(f) + 1
        if i >= 0 and all(cells[i + j] >> f[j] & 1 for j in range(len(f))):
            return True
    return False


def candidate_set_letters(spec: SubshiftSpec, caps: WorkCaps = DEFAULT_CAPS) -> list[int]:
    """All unions of the free letters with a subset of the constrained ones.

    Letters absent from every forbidden word ("free") can be added to any
    cell of a legal set-word without creating a forbidden fit, and doing so
    only increases the score; hence every maximizing cycle can be written
    over this universe. The empty union is dropped when there are no free
    letters.
    """
    constrained = spec.constrained_mask
    free = spec.alphabet.full_mask & ~constrained
    bits = mask_bits(constrained)
    if 1 << len(bits) > caps.candidates:
        raise WorkCapExceeded(
            f"2^{len(bits)} candidate set-letters exceed the cap {caps.candidates}; "
            "use exhaustive mode on a smaller alphabet")
    out = set()
    for sub in range(1 << len(bits)):
        m = free
        for j, b in enumerate(bits):
            if sub >> j & 1:
                m |= 1 << b
        if m:
            out.add(m)
    return sorted(out)


def exhaustive_set_letters(spec: SubshiftSpec) -> list[int]:
    return list(range(1, 1 << spec.sigma))


@dataclass(frozen=True)
class LegalityReport:
    legal: bool
    witness: tuple | None = None  # (selection letters, offset, forbidden word)
    reason: str = ""


@dataclass(frozen=True, eq=False)
class WindowGraph:
    """Trimmed de Bruijn graph on fully legal k-windows of set-letters."""

    k: int
    universe: tuple[int, ...]
    windows: tuple[tuple[int, ...], ...]
    succ: tuple[tuple[tuple[int, int], ...], ...]  # vertex -> ((dst, mask), ...)
    edge_index: dict = field(repr=False)           # (src, mask) -> dst

    @property
    def num_vertices(self) -> int:
        return len(self.windows)

    @property
    def num_edges(self) -> int:
        return sum(len(s) for s in self.succ)

    def edges(self):
        for u, out in enumerate(self.succ):
            for dst, mask in out:
                yield u, dst, mask

    def max_weight(self) -> int:
        return max((mask_size(m) for _, _, m in self.edges()), default=0)

    def window_index(self) -> dict:
        return {w: i for i, w in enumerate(self.windows)}

    def labels_path(self, cells) -> bool:
        """Does the set-word read along a path of this graph?"""
        k = self.k
        if len(cells) < k:
            return any(
                w[i:i + len(cells)] == tuple(cells)
                for w in self.windows
                for i in range(k - len(cells) + 1))
        index = self.window_index()
        cur = index.get(tuple(cells[:k]))
        if cur is None:
            return False
        for pos in range(k, len(cells)):
            cur = self.edge_index.get((cur, cells[pos]))
            if cur is None:
                return False
        return True

    def dump_lines(self, alphabet) -> list[str]:
        lines = []
        for i, w in enumerate(self.windows):
            label = alphabet.set_word_str(w) if w else "-"
            lines.append(f"vertex {i} {label}")
        for u, out in enumerate(self.succ):
            for dst, mask in out:
                lines.append(f"edge {u} {dst} {mask_size(mask)} {alphabet.set_letter_str(mask)}")
        return lines


def _enumerate_windows(universe, k, forbidden):
    """All fully legal k-tuples over the universe, in lexicographic mask order."""
    if k == 0:
        return [()]
    out = []
    # DFS in order; each appended cell is checked for fits ending at it.
    def extend(prefix):
        if len(prefix) == k:
            out.append(prefix)
            return
        for m in universe:
            nxt = prefix + (m,)
            if not _fit_ending_at(nxt, len(nxt) - 1, forbidden):
                extend(nxt)
    extend(())
    return out


def _trim(n, edge_list):
    """Vertex set surviving iterative removal of sources and sinks."""
    alive = set(range(n))
    while True:
        has_out = {u for u, v, _ in edge_list if u in alive and v in alive}
        has_in = {v for u, v, _ in edge_list if u in alive and v in alive}
        keep = alive & has_out & has_in
        if keep == alive:
            return alive
        alive = keep


def build_window_graph(spec: SubshiftSpec, universe="candidates",
                       caps: WorkCaps = DEFAULT_CAPS) -> WindowGraph:
    """Construct and trim the window graph over the chosen set-letter universe.

    `universe` is "candidates", "exhaustive", or an explicit list of masks.
    Raises EmptyLanguageError when trimming empties the graph: singleton
    windows of any bi-infinite point always survive, so an empty trimmed
    graph means the underlying shift space is empty (or, for an explicit
    universe, that it supports no bi-infinite multi-choice point).
    """
    if universe == "candidates":
        masks = candidate_set_letters(spec, caps)
    elif universe == "exhaustive":
        masks = exhaustive_set_letters(spec)
    else:
        masks = sorted(set(check_set_word(universe, spec.sigma)))
    k = spec.memory
    if len(masks) ** k > caps.vertices:
        raise WorkCapExceeded(
            f"{len(masks)}^{k} windows exceed the vertex cap {caps.vertices}")
    windows = _enumerate_windows(masks, k, spec.forbidden)
    index = {w: i for i, w in enumerate(windows)}
    edge_list = []
    for u, w in enumerate(windows):
        for m in masks:
            ext = w + (m,)
            if _fit_ending_at(ext, k, spec.forbidden):
                continue
            v = index.get(ext[1:])
            if v is not None:
                edge_list.append((u, v, m))
    alive = _trim(len(windows), edge_list)
    if not alive:
        raise EmptyLanguageError(
            f"window graph over {len(masks)} set-letters trimmed to nothing: "
            f"{spec.describe()} has empty language (or no bi-infinite point "
            "over this universe)")
    keep = sorted(alive)
    remap = {old: new for new, old in enumerate(keep)}
    new_windows = tuple(windows[i] for i in keep)
    succ = [[] for _ in keep]
    edge_index = {}
    for u, v, m in edge_list:
        if u in alive and v in alive:
            su, sv = remap[u], remap[v]
            succ[su].append((sv, m))
            edge_index[(su, m)] = sv
    return WindowGraph(
        k=k,
        universe=tuple(masks),
        windows=new_windows,
        succ=tuple(tuple(sorted(s)) for s in succ),
        edge_index=edge_index,
    )


def is_independently_legal(cells, spec: SubshiftSpec, mode: str = "local",
                           caps: WorkCaps = DEFAULT_CAPS) -> LegalityReport:
    """Decide independent legality of a set-word.

    mode "local": no selection of the word contains a forbidden word.
    mode "extendable": additionally the word labels a path of the trimmed
    window graph over the candidate universe enlarged by the word's own
    cells, i.e. it occurs inside a bi-infinite multi-choice point.
    """
    cells = check_set_word(cells, spec.sigma)
    hit = forbidden_fit(cells, spec.forbidden)
    if hit is not None:
        offset, word = hit
        selection = [mask_bits(m)[0] for m in cells]
        selection[offset:offset + len(word)] = word
        return LegalityReport(False, witness=(tuple(selection), offset, word),
                              reason="forbidden selection")
    if mode == "local":
        return LegalityReport(True)
    if mode != "extendable":
        raise ValueError(f"unknown legality mode {mode!r}")
    universe = sorted(set(candidate_set_letters(spec, caps)) | set(cells))
    try:
        graph = build_window_graph(spec, universe=universe, caps=caps)
    except EmptyLanguageError:
        return LegalityReport(False, reason="not extendable")
    if graph.labels_path(cells):
        return LegalityReport(True)
    return LegalityReport(False, reason="not extendable")
