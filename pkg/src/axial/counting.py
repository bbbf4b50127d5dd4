"""Exact counting of boxes of axial powers, 1D entropy, and the brute oracle.

A d-dimensional box count is the number of alphabet fillings of
[0,n-1]^d in which every axis-parallel line avoids every forbidden word
(windows fully inside the box, free boundaries). Counts are exact big
integers; the float estimates (1/n^d)*ln(count) are derived at display
time and upper-bound the limiting entropy from above.

Letters that occur in no forbidden word are interchangeable, so they are
collapsed into a single weighted class before counting; this turns the
26-letter introduction example into a 3-letter computation and is exact
because forbidden words mention only constrained letters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .automaton import _trim
from .core import (
    DEFAULT_CAPS,
    ExactScore,
    SpecError,
    SubshiftSpec,
    WorkCaps,
    WorkCapExceeded,
    _is_subword,
    compare_log_means,
    mask_bits,
)


def _collapsed(spec: SubshiftSpec):
    """Class weights and forbidden words over the collapsed alphabet."""
    constrained = sorted({a for f in spec.forbidden for a in f})
    cmap = {a: i for i, a in enumerate(constrained)}
    weights = [1] * len(constrained)
    nfree = spec.sigma - len(constrained)
    if nfree:
        weights.append(nfree)
    forb = tuple(tuple(cmap[a] for a in f) for f in spec.forbidden)
    return tuple(weights), forb


def _ends_with_forbidden(word, forb) -> bool:
    for f in forb:
        if len(f) <= len(word) and word[-len(f):] == f:
            return True
    return False


def _line_count(weights, forb, n: int) -> int:
    k = max((len(f) for f in forb), default=1) - 1 if forb else 0
    states = {(): 1}
    for _ in range(n):
        new = {}
        for suf, cnt in states.items():
            for c, wt in enumerate(weights):
                word = suf + (c,)
                if _ends_with_forbidden(word, forb):
                    continue
                nsuf = word[-k:] if k else ()
                new[nsuf] = new.get(nsuf, 0) + cnt * wt
        states = new
    return sum(states.values())


def _line_words(weights, forb, n: int):
    """All legal collapsed words of length n with their multiplicities."""
    out = []

    def rec(word, wt):
        if len(word) == n:
            out.append((word, wt))
            return
        for c, w in enumerate(weights):
            nxt = word + (c,)
            if not _ends_with_forbidden(nxt, forb):
                rec(nxt, wt * w)

    rec((), 1)
    return out


def _column_fit(state, row, forb) -> bool:
    """Does some forbidden word fit vertically, ending in the new row?"""
    h = len(state)
    for f in forb:
        lf = len(f)
        if lf - 1 > h:
            continue
        last = f[-1]
        for x, c in enumerate(row):
            if c != last:
                continue
            if all(state[h - lf + 1 + j][x] == f[j] for j in range(lf - 1)):
                return True
    return False


def _transfer_count(weights, forb, width: int, height: int, caps: WorkCaps) -> int:
    k = max((len(f) for f in forb), default=1) - 1 if forb else 0
    rows = _line_words(weights, forb, width)
    if not rows:
        return 0
    nodes = 0
    states = {(): 1}
    for _ in range(height):
        new = {}
        nodes += len(states) * len(rows)
        if nodes > caps.nodes:
            raise WorkCapExceeded(
                f"transfer-matrix expansion {nodes} exceeds the node cap {caps.nodes}")
        for state, cnt in states.items():
            for row, wt in rows:
                if _column_fit(state, row, forb):
                    continue
                nstate = (state + (row,))[-k:] if k else ()
                new[nstate] = new.get(nstate, 0) + cnt * wt
        states = new
        if len(states) > caps.vertices:
            raise WorkCapExceeded(
                f"{len(states)} transfer states exceed the vertex cap {caps.vertices}")
    return sum(states.values())


def _backtrack_count(weights, forb, sides, caps: WorkCaps) -> int:
    total = math.prod(sides)
    if total > caps.sites:
        raise WorkCapExceeded(f"{total} sites exceed the site cap {caps.sites}")
    d = len(sides)
    strides = [math.prod(sides[i + 1:]) for i in range(d)]
    coords = [
        tuple((p // strides[i]) % sides[i] for i in range(d))
        for p in range(total)
    ]
    forb_by_last = [tuple(f for f in forb if f[-1] == c) for c in range(len(weights))]
    grid = [None] * total
    budget = [caps.nodes]

    def place(p: int, wt: int) -> int:
        if p == total:
            return wt
        acc = 0
        here = coords[p]
        for c, w in enumerate(weights):
            budget[0] -= 1
            if budget[0] < 0:
                raise WorkCapExceeded(
                    f"backtracking expansions exceed the node cap {caps.nodes}")
            ok = True
            for f in forb_by_last[c]:
                lf = len(f)
                for i in range(d):
                    if here[i] >= lf - 1:
                        base = p - (lf - 1) * strides[i]
                        if all(grid[base + j * strides[i]] == f[j] for j in range(lf - 1)):
                            ok = False
                            break
                if not ok:
                    break
            if ok:
                grid[p] = c
                acc += place(p + 1, wt * w)
        grid[p] = None
        return acc

    return place(0, 1)


def count_box_sides(spec: SubshiftSpec, sides, caps: WorkCaps = DEFAULT_CAPS,
                    method: str = "auto") -> int:
    """Exact count of legal fillings of a general box (tuple of side lengths)."""
    sides = tuple(int(s) for s in sides)
    if not sides or any(s < 1 for s in sides):
        raise SpecError(f"box sides must be positive, got {sides}")
    weights, forb = _collapsed(spec)
    d = len(sides)
    if method == "auto":
        if d == 1:
            if sides[0] > 100_000:
                raise WorkCapExceeded("1D line too long")
            return _line_count(weights, forb, sides[0])
        if d == 2 and min(sides) <= caps.transfer_n:
            w = min(sides)
            h = max(sides)
            return _transfer_count(weights, forb, w, h, caps)
        return _backtrack_count(weights, forb, sides, caps)
    if method == "transfer":
        if d != 2:
            raise SpecError("the transfer-matrix path is 2D only")
        if min(sides) > caps.transfer_n:
            raise WorkCapExceeded(
                f"strip width {min(sides)} exceeds the transfer cap {caps.transfer_n}")
        return _transfer_count(weights, forb, min(sides), max(sides), caps)
    if method == "backtracking":
        return _backtrack_count(weights, forb, sides, caps)
    raise ValueError(f"unknown counting method {method!r}")


@dataclass(frozen=True)
class BoxCount:
    n: int
    d: int
    count: int

    @property
    def estimate(self) -> float:
        if self.count == 0:
            return float("-inf")
        return math.log(self.count) / self.n ** self.d


def count_box(spec: SubshiftSpec, n: int, d: int, caps: WorkCaps = DEFAULT_CAPS,
              method: str = "auto") -> BoxCount:
    """Exact number of legal fillings of the cube [0,n-1]^d."""
    return BoxCount(n, d, count_box_sides(spec, (n,) * d, caps=caps, method=method))


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple[BoxCount, ...]
    hind: ExactScore

    def checks(self, tol: float = 1e-9) -> dict:
        """Sandwich and monotonicity flags over the rows actually computed."""
        by_nd = {(r.n, r.d): r for r in self.rows}
        sandwich = all(r.estimate >= self.hind.nats - tol for r in self.rows)
        slice_monotone = all(
            by_nd[(n, d + 1)].count <= by_nd[(n, d)].count ** n
            for (n, d) in by_nd if (n, d + 1) in by_nd
        )
        doubling = all(
            by_nd[(2 * n, d)].estimate <= by_nd[(n, d)].estimate + tol
            for (n, d) in by_nd if (2 * n, d) in by_nd
        )
        return {"sandwich": sandwich, "slice_monotone": slice_monotone,
                "doubling": doubling}


def entropy_estimate_table(spec: SubshiftSpec, n_list, d_list,
                           caps: WorkCaps = DEFAULT_CAPS) -> ConvergenceTable:
    """Box-count estimates over a grid of (n, d) with the exact optimum attached."""
    from .optimize import independence_entropy

    hind, _ = independence_entropy(spec, caps=caps)
    rows = []
    for d in d_list:
        for n in n_list:
            rows.append(count_box(spec, n, d, caps=caps))
    return ConvergenceTable(tuple(rows), hind)


# ---------------------------------------------------------------------------
# 1D topological entropy (letter-level transfer operator)
# ---------------------------------------------------------------------------

def entropy_1d(spec: SubshiftSpec, tol: float = 1e-10,
               caps: WorkCaps = DEFAULT_CAPS) -> float:
    """ln of the Perron eigenvalue of the letter-level k-window graph.

    Power iteration on (A + I) over the trimmed recurrent part; the shift
    makes the iteration aperiodic without moving the Perron vector.
    Returns -inf when the language is empty, and 0 when the shift space is
    finite (a union of periodic orbits).
    """
    k = spec.memory
    if spec.sigma ** k > caps.vertices:
        raise WorkCapExceeded(
            f"{spec.sigma}^{k} letter windows exceed the vertex cap {caps.vertices}")
    words = [()]
    for _ in range(k):
        nxt = []
        for w in words:
            for c in range(spec.sigma):
                ext = w + (c,)
                if not _ends_with_forbidden(ext, spec.forbidden):
                    nxt.append(ext)
        words = nxt
    index = {w: i for i, w in enumerate(words)}
    edges = []
    for u, w in enumerate(words):
        for c in range(spec.sigma):
            ext = w + (c,)
            if _ends_with_forbidden(ext, spec.forbidden):
                continue
            v = index.get(ext[1:])
            if v is not None:
                edges.append((u, v, c))
    alive = _trim(len(words), edges)
    if not alive:
        return float("-inf")
    remap = {old: new for new, old in enumerate(sorted(alive))}
    src = np.array([remap[u] for u, v, _ in edges if u in alive and v in alive], dtype=np.int64)
    dst = np.array([remap[v] for u, v, _ in edges if u in alive and v in alive], dtype=np.int64)
    nv = len(alive)
    x = np.full(nv, 1.0 / nv)
    lam_prev = None
    for it in range(1_000_000):
        y = x.copy()
        np.add.at(y, dst, x[src])
        lam = float(y.sum())  # x is L1-normalized, so this is the growth ratio
        y /= lam
        x = y
        if lam_prev is not None and abs(lam - lam_prev) <= tol * lam and it >= 16:
            break
        lam_prev = lam
    return math.log(lam - 1.0)


# ---------------------------------------------------------------------------
# Brute-force independence-entropy oracle
# ---------------------------------------------------------------------------

def _brute_fully_legal(cells, forbidden) -> bool:
    """Selection-sweep legality check, kept independent of the fit shortcut."""
    for sel in itertools.product(*[mask_bits(m) for m in cells]):
        for f in forbidden:
            if _is_subword(f, sel):
                return False
    return True


def oracle_hind(spec: SubshiftSpec, max_len: int = 8,
                caps: WorkCaps = DEFAULT_CAPS) -> ExactScore | None:
    """Best score over periodic multi-choice points of period <= max_len.

    Realizes the sup-over-points definition by brute force: cyclic set-words
    are exactly the closed walks of the exhaustive window graph (built here
    with selection-sweep legality, independently of the candidate pipeline),
    and the best product over closed l-walks comes from max-times matrix
    powers. Returns None when no cycle of length <= max_len exists.
    """
    sigma = spec.sigma
    if (2 ** sigma - 1) ** max_len > caps.nodes:
        raise WorkCapExceeded(
            f"(2^{sigma}-1)^{max_len} cyclic set-words exceed the node cap {caps.nodes}")
    if sigma ** max_len >= 2 ** 62:
        raise WorkCapExceeded("walk products would overflow the int64 oracle tables")
    masks = list(range(1, 1 << sigma))
    k = spec.memory
    windows = [w for w in itertools.product(masks, repeat=k)
               if _brute_fully_legal(w, spec.forbidden)] if k else [()]
    if not windows:
        return None
    index = {w: i for i, w in enumerate(windows)}
    nv = len(windows)
    adj = np.zeros((nv, nv), dtype=np.int64)
    for u, w in enumerate(windows):
        for m in masks:
            ext = w + (m,)
            if not _brute_fully_legal(ext, spec.forbidden):
                continue
            v = index.get(ext[1:])
            if v is not None:
                # parallel loops collapse to the heaviest one (k = 0 case)
                adj[u, v] = max(adj[u, v], m.bit_count())
    best = None
    cur = adj
    for length in range(1, max_len + 1):
        if length > 1:
            cur = (cur[:, :, None] * adj[None, :, :]).max(axis=1)
        p = int(cur.diagonal().max())
        if p >= 1:
            if best is None or compare_log_means(p, length, best[0], best[1]) > 0:
                best = (p, length)
    if best is None:
        return None
    return ExactScore.of(best[0], best[1])
