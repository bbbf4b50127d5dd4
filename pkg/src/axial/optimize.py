"""Exact cycle optimization on window graphs.

The geometric-mean-optimal cycle of the window graph carries the
independence entropy (equal to the limiting entropy of the axial powers),
so everything here is exact: cycle means are compared by cross-powering
big integers / rationals, the Karp dynamic program runs on exact products,
and the witness cycle is pulled out of the tight subgraph of an exact
Bellman longest-path computation. Floats never decide anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .automaton import build_window_graph
from .core import (
    DEFAULT_CAPS,
    EmptyLanguageError,
    ExactScore,
    SpecError,
    SubshiftSpec,
    WorkCaps,
    _divisors,
    _perfect_root,
    compare_log_means,
    independence_score,
    mask_size,
)


def canonical_rotation(masks) -> tuple[int, ...]:
    """Lexicographically least rotation of a cyclic set-word."""
    t = tuple(masks)
    return min(t[i:] + t[:i] for i in range(len(t)))


def _log_of(p) -> float:
    if isinstance(p, int):
        return math.log(p)
    return math.log(p.numerator) - math.log(p.denominator)


# float logs of big ints are good to ~1e-12 absolute here; anything decided
# outside this band is rigorous, the rest falls back to exact cross-powering
_FLOAT_BAND = 1e-6


def _cmp_means_fast(p1, n1, p2, n2) -> int:
    """compare_log_means with a certified float prefilter (internal scans only)."""
    gap = _log_of(p1) / n1 - _log_of(p2) / n2
    if gap > _FLOAT_BAND:
        return 1
    if gap < -_FLOAT_BAND:
        return -1
    return compare_log_means(p1, n1, p2, n2)


def _least_cyclic_period(word) -> int:
    m = len(word)
    for p in sorted(_divisors(m)):
        if all(word[(i + p) % m] == word[i] for i in range(m)):
            return p
    return m


@dataclass(frozen=True)
class MaximizingCycle:
    """One period of a score-maximizing periodic multi-choice point."""

    word: tuple[int, ...]   # set-letter masks, lexicographically least rotation
    score: ExactScore
    simple: bool            # no repeated k-window around the cycle


@dataclass(frozen=True)
class RationalScore:
    """(1/n)*log(mass) for a positive rational mass; the pressure analogue."""

    mass: Fraction
    n: int

    def __post_init__(self):
        if self.mass <= 0 or self.n < 1:
            raise SpecError("rational scores need mass > 0 and n >= 1")

    @classmethod
    def of(cls, mass, n: int) -> "RationalScore":
        mass = Fraction(mass)
        if mass == 1:
            return cls(Fraction(1), 1)
        for e in sorted(_divisors(n), reverse=True):
            if e == 1:
                break
            rn = _perfect_root(mass.numerator, e)
            rd = _perfect_root(mass.denominator, e)
            if rn is not None and rd is not None:
                return cls(Fraction(rn, rd), n // e)
        return cls(mass, n)

    @property
    def nats(self) -> float:
        return (math.log(self.mass.numerator) - math.log(self.mass.denominator)) / self.n

    def to_exact(self) -> ExactScore | None:
        if self.mass.denominator == 1:
            return ExactScore.of(self.mass.numerator, self.n)
        return None

    def compare(self, other) -> int:
        q = other.mass if isinstance(other, RationalScore) else other.p
        return compare_log_means(self.mass, self.n, q, other.n)


# ---------------------------------------------------------------------------
# Strongly connected components (iterative Tarjan)
# ---------------------------------------------------------------------------

def _tarjan_sccs(n, succ):
    index = [None] * n
    low = [0] * n
    onstack = [False] * n
    stack = []
    sccs = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                onstack[v] = True
            advanced = False
            out = succ[v]
            for i in range(pi, len(out)):
                w = out[i][0]
                if index[w] is None:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if onstack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return sccs


def _internal_edges(scc, succ):
    inside = set(scc)
    return {u: tuple((v, m) for v, m in succ[u] if v in inside) for u in scc}


def _karp(verts, internal, weight):
    """Max cycle mean of a strongly connected subgraph as (ratio, span).

    The classic max-min over exact walk products from a fixed source:
    D_l(v) = best product over l-edge walks, answer
    max_v min_l ((D_N(v)/D_l(v)), N-l), all comparisons exact.
    """
    n = len(verts)
    source = verts[0]
    levels = [dict() for _ in range(n + 1)]
    levels[0][source] = 1
    for l in range(1, n + 1):
        prev, cur = levels[l - 1], levels[l]
        for u, val in prev.items():
            for v, m in internal[u]:
                cand = val * weight(m)
                old = cur.get(v)
                if old is None or cand > old:
                    cur[v] = cand
    best = None
    for v, dn in levels[n].items():
        vmin = None
        for l in range(n):
            dl = levels[l].get(v)
            if dl is None:
                continue
            cand = (Fraction(dn) / dl, n - l)
            if vmin is None or _cmp_means_fast(cand[0], cand[1], vmin[0], vmin[1]) < 0:
                vmin = cand
        if vmin is None:
            continue
        if best is None or _cmp_means_fast(vmin[0], vmin[1], best[0], best[1]) > 0:
            best = vmin
    if best is None:
        return None
    # minimal-span form keeps downstream potentials and prunes small
    reduced = RationalScore.of(best[0], best[1])
    return reduced.mass, reduced.n


def _potentials(verts, internal, weight, ratio, span):
    """Exact longest-path values with edge weights w^span / ratio.

    All cycle products are <= 1 by optimality of (ratio, span), so the
    Bellman iteration stabilizes within |verts| - 1 rounds.
    """
    red = {}
    def reduced(m):
        val = red.get(m)
        if val is None:
            val = Fraction(weight(m)) ** span / ratio
            red[m] = val
        return val

    d = {verts[0]: Fraction(1)}
    for _ in range(len(verts) - 1):
        changed = False
        for u in verts:
            du = d.get(u)
            if du is None:
                continue
            for v, m in internal[u]:
                cand = du * reduced(m)
                if v not in d or cand > d[v]:
                    d[v] = cand
                    changed = True
        if not changed:
            break
    return d, reduced


def _critical_cycle(verts, internal, weight, ratio, span):
    """A vertex-simple cycle of mean exactly (1/span)*log(ratio).

    Around any cycle of the tight subgraph (edges with d(u)*w' == d(v))
    the reduced products telescope to 1, and every optimal cycle is tight,
    so a DFS for any cycle among tight edges suffices.
    """
    d, reduced = _potentials(verts, internal, weight, ratio, span)
    tight = {
        u: tuple((v, m) for v, m in internal[u]
                 if u in d and v in d and d[u] * reduced(m) == d[v])
        for u in verts
    }
    visited = set()
    for start in verts:
        if start in visited:
            continue
        path = [start]
        epath = []
        pos = {start: 0}
        iters = [iter(tight[start])]
        while iters:
            try:
                v, m = next(iters[-1])
            except StopIteration:
                iters.pop()
                gone = path.pop()
                del pos[gone]
                visited.add(gone)
                if epath:
                    epath.pop()
                continue
            if v in pos:
                i = pos[v]
                return path[i:], tuple(epath[i:]) + (m,)
            if v in visited:
                continue
            pos[v] = len(path)
            path.append(v)
            epath.append(m)
            iters.append(iter(tight[v]))
    raise AssertionError("tight subgraph of an optimal component must contain a cycle")


def _cyclic_components(graph, weight):
    """Per-SCC Karp data for components that contain at least one cycle."""
    sccs = _tarjan_sccs(graph.num_vertices, graph.succ)
    out = []
    for scc in sccs:
        internal = _internal_edges(scc, graph.succ)
        if len(scc) == 1 and not internal[scc[0]]:
            continue
        karp = _karp(scc, internal, weight)
        assert karp is not None  # cyclic strongly connected components always yield one
        out.append((scc, internal, karp[0], karp[1]))
    return out


def _best_cycle(graph, weight):
    comps = _cyclic_components(graph, weight)
    if not comps:
        raise EmptyLanguageError("trimmed window graph has no cycle")
    best = None
    for comp in comps:
        if best is None or compare_log_means(comp[2], comp[3], best[2], best[3]) > 0:
            best = comp
    verts, internal, ratio, span = best
    cyc_verts, cyc_masks = _critical_cycle(verts, internal, weight, ratio, span)
    return ratio, span, cyc_verts, cyc_masks


def max_mean_cycle(graph) -> tuple[ExactScore, MaximizingCycle]:
    """Exact optimum of (1/len)*log(prod of edge weights) over graph cycles."""
    ratio, span, cyc_verts, cyc_masks = _best_cycle(graph, mask_size)
    word = canonical_rotation(cyc_masks)
    score = independence_score(word)
    if compare_log_means(score.p, score.n, ratio, span) != 0:
        raise AssertionError("witness cycle does not achieve the Karp optimum")
    return score, MaximizingCycle(word=word, score=score, simple=len(set(cyc_verts)) == len(cyc_verts))


def independence_entropy(spec: SubshiftSpec, caps: WorkCaps = DEFAULT_CAPS):
    """h_ind(X) = h_inf(X) with a witness cycle, via the candidate graph."""
    graph = build_window_graph(spec, universe="candidates", caps=caps)
    return max_mean_cycle(graph)


# ---------------------------------------------------------------------------
# Simple maximizing cycle enumeration
# ---------------------------------------------------------------------------

def enumerate_simple_maximizing_cycles(spec: SubshiftSpec, max_len: int | None = None,
                                       max_count: int | None = None,
                                       caps: WorkCaps = DEFAULT_CAPS):
    """All simple cycles of the candidate window graph with score == h_ind.

    Returns (cycles, complete). Cycles are deduplicated up to rotation and
    sorted; `complete` is False when max_len/max_count cut the search.
    DFS paths are pruned exactly: with potentials d from the Bellman stage,
    a path of product P and length l at vertex v can close into a cycle of
    mean h_ind only if P^span * d(root) >= d(v) * ratio^l.
    """
    graph = build_window_graph(spec, universe="candidates", caps=caps)
    weight = mask_size
    comps = _cyclic_components(graph, weight)
    if not comps:
        raise EmptyLanguageError("trimmed window graph has no cycle")
    ratio, span = None, None
    for _, _, r, s in comps:
        if ratio is None or compare_log_means(r, s, ratio, span) > 0:
            ratio, span = r, s

    found: dict[tuple, None] = {}
    complete = True
    for verts, internal, r, s in comps:
        if compare_log_means(r, s, ratio, span) != 0:
            continue
        d, _reduced = _potentials(verts, internal, weight, ratio, span)
        rpow = [Fraction(1)]
        def ratio_pow(l):
            while len(rpow) <= l:
                rpow.append(rpow[-1] * ratio)
            return rpow[l]

        order = {v: i for i, v in enumerate(verts)}
        for root in verts:
            droot = d[root]
            # DFS over simple paths from root using vertices >= root only.
            stack = [(root, 1, (), iter(internal[root]))]
            onpath = {root}
            while stack:
                v, prod, masks, it = stack[-1]
                step = next(it, None)
                if step is None:
                    stack.pop()
                    onpath.discard(v)
                    continue
                w, m = step
                if order[w] < order[root]:
                    continue
                nprod = prod * weight(m)
                nlen = len(stack)  # edges in path after taking this step
                if w == root:
                    if compare_log_means(nprod, nlen, ratio, span) == 0 and \
                            (max_len is None or nlen <= max_len):
                        word = canonical_rotation(masks + (m,))
                        if word not in found:
                            if max_count is not None and len(found) >= max_count:
                                complete = False
                                return _as_cycles(found, ratio, span), complete
                            found[word] = None
                    continue
                if w in onpath:
                    continue
                # exact feasibility of ever closing at mean == target
                if Fraction(nprod) ** span * droot < d[w] * ratio_pow(nlen):
                    continue
                if max_len is not None and nlen >= max_len:
                    complete = False  # a feasible extension was cut off
                    continue
                onpath.add(w)
                stack.append((w, nprod, masks + (m,), iter(internal[w])))
    return _as_cycles(found, ratio, span), complete


def _as_cycles(found, ratio, span):
    cycles = []
    for word in sorted(found):
        score = independence_score(word)
        assert compare_log_means(score.p, score.n, ratio, span) == 0
        cycles.append(MaximizingCycle(word=word, score=score, simple=True))
    return tuple(cycles)


# ---------------------------------------------------------------------------
# Condition (2): finite 2D orbits built from row phases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseOrbit2D:
    """A doubly periodic 2D point whose rows are all shifts of a cycle.

    Row j carries phase c_j with c_{j+t} = c_j + drift (mod period); the
    induced point is x[(i, j)] = word[(i + c_j) mod period]. Rows are
    shifts by construction; membership in the condition-(2) family also
    requires every column to be a shift.
    """

    period: int
    t: int
    drift: int
    phases: tuple[int, ...]

    def phase_at(self, j: int) -> int:
        return (self.phases[j % self.t] + (j // self.t) * self.drift) % self.period

    def grid(self, word, rows: int, cols: int):
        return [
            [word[(i + self.phase_at(j)) % self.period] for i in range(cols)]
            for j in range(rows)
        ]


@dataclass(frozen=True)
class ConditionTwoResult:
    status: str                  # unique_within_bound | counterexample | budget_exceeded
    orbit: PhaseOrbit2D | None
    bound: int
    nodes: int


def _columns_are_shifts(word, seq):
    m = len(word)
    period = math.lcm(len(seq), m)
    for i in range(m):
        col = [word[(i + seq[j % len(seq)]) % m] for j in range(period)]
        if not any(all(col[j] == word[(q + j) % m] for j in range(period)) for q in range(m)):
            return False
    return True


def _orbit_canonical(seq, m):
    length = len(seq)
    p = length
    for cand in sorted(_divisors(length)):
        if all(seq[(j + cand) % length] == seq[j] for j in range(length)):
            p = cand
            break
    core = seq[:p]
    return min(
        tuple((core[(v + j) % p] - core[v]) % m for j in range(p))
        for v in range(p)
    )


class _BudgetExceeded(Exception):
    pass


def check_condition_two(word, bound: int | None = None,
                        node_budget: int = 500_000) -> ConditionTwoResult:
    """Search finite orbits of 2D points whose rows and columns shift the cycle.

    Enumerates row-phase data (t <= bound, drift, phases with c_0 = 0) and
    keeps assignments whose induced point has every column a shift of the
    cycle. Unique within the bound iff the only surviving orbit is the
    diagonal one; if the reversal of the word is one of its rotations and
    the period exceeds 2, the anti-diagonal point is an immediate
    counterexample.
    """
    word = tuple(word)
    m = len(word)
    if _least_cyclic_period(word) != m:
        raise SpecError("condition-two input must be a primitive cycle word")
    T = bound if bound is not None else 2 * m
    if m == 1:
        return ConditionTwoResult("unique_within_bound", None, T, 0)
    if m > 2 and canonical_rotation(word[::-1]) == canonical_rotation(word):
        orbit = PhaseOrbit2D(period=m, t=1, drift=m - 1, phases=(0,))
        assert _columns_are_shifts(word, [orbit.phase_at(j) for j in range(m)])
        return ConditionTwoResult("counterexample", orbit, T, 0)

    diagonal = tuple(range(m))
    orbits: dict[tuple, PhaseOrbit2D] = {}
    nodes = 0

    def viable(prefix):
        rows = len(prefix)
        for i in range(m):
            if not any(
                all(word[(i + prefix[j]) % m] == word[(q + j) % m] for j in range(rows))
                for q in range(m)
            ):
                return False
        return True

    def finish(t, s, phases):
        length = t if s == 0 else t * (m // math.gcd(s, m))
        seq = [(phases[j % t] + (j // t) * s) % m for j in range(length)]
        if _columns_are_shifts(word, seq):
            canon = _orbit_canonical(seq, m)
            orbits.setdefault(canon, PhaseOrbit2D(m, t, s, tuple(phases)))

    def extend(t, s, phases):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise _BudgetExceeded
        if len(phases) == t:
            finish(t, s, phases)
            return
        for c in range(m):
            phases.append(c)
            if viable(phases):
                extend(t, s, phases)
            phases.pop()

    try:
        for t in range(1, T + 1):
            for s in range(m):
                extend(t, s, [0])
    except _BudgetExceeded:
        return ConditionTwoResult("budget_exceeded", None, T, nodes)

    others = sorted(k for k in orbits if k != diagonal)
    if not others:
        return ConditionTwoResult("unique_within_bound", None, T, nodes)
    return ConditionTwoResult("counterexample", orbits[others[0]], T, nodes)


# ---------------------------------------------------------------------------
# Classification of isotropic limiting measures of maximal entropy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MMEClassification:
    verdict: str                       # unique | exactly_k | multiple | unknown_within_bounds
    count: int | None
    entropy: ExactScore
    cycles: tuple[MaximizingCycle, ...]
    counterexample: PhaseOrbit2D | None
    complete_enumeration: bool
    bounds: dict


def classify_mme(spec: SubshiftSpec, cond2_bound: int | None = None,
                 cycle_max_len: int | None = None, cycle_max_count: int | None = 64,
                 cond2_budget: int = 500_000,
                 caps: WorkCaps = DEFAULT_CAPS) -> MMEClassification:
    """Decide unique / exactly-k / multiple for the limiting isotropic measures.

    Unique requires exactly one simple maximizing cycle (enumeration must be
    complete) plus the bounded condition-(2) check; exactly-k additionally
    requires pairwise set-letter-disjoint cycles each passing condition (2).
    Two or more verified cycles already falsify uniqueness, hence "multiple"
    even when finer information is bound-limited.
    """
    entropy, _witness = independence_entropy(spec, caps=caps)
    cycles, complete = enumerate_simple_maximizing_cycles(
        spec, max_len=cycle_max_len, max_count=cycle_max_count, caps=caps)
    bounds = {
        "cond2_bound": cond2_bound,
        "cond2_budget": cond2_budget,
        "cycle_max_len": cycle_max_len,
        "cycle_max_count": cycle_max_count,
    }

    def result(verdict, count=None, counterexample=None):
        return MMEClassification(verdict, count, entropy, cycles, counterexample,
                                 complete, bounds)

    if len(cycles) == 0:
        return result("unknown_within_bounds")
    if len(cycles) == 1:
        if not complete:
            return result("unknown_within_bounds")
        c2 = check_condition_two(cycles[0].word, bound=cond2_bound, node_budget=cond2_budget)
        if c2.status == "unique_within_bound":
            return result("unique", count=1)
        if c2.status == "counterexample":
            return result("multiple", counterexample=c2.orbit)
        return result("unknown_within_bounds")

    # Condition (1) of the uniqueness theorem fails outright.
    letters_disjoint = True
    seen: set[int] = set()
    for cyc in cycles:
        cells = set(cyc.word)
        if cells & seen:
            letters_disjoint = False
            break
        seen |= cells
    if complete and letters_disjoint:
        checks = [check_condition_two(c.word, bound=cond2_bound, node_budget=cond2_budget)
                  for c in cycles]
        if all(c.status == "unique_within_bound" for c in checks):
            return result("exactly_k", count=len(cycles))
        orbit = next((c.orbit for c in checks if c.status == "counterexample"), None)
        return result("multiple", counterexample=orbit)
    return result("multiple")


# ---------------------------------------------------------------------------
# Pressure for single-site weights
# ---------------------------------------------------------------------------

def _letter_weights(spec, weights):
    table = {}
    for key, value in weights.items():
        idx = spec.alphabet.index(key) if isinstance(key, str) else int(key)
        if not 0 <= idx < spec.sigma:
            raise SpecError(f"weight for unknown letter {key!r}")
        table[idx] = Fraction(value)
    missing = [spec.alphabet.symbols[i] for i in range(spec.sigma) if i not in table]
    if missing:
        raise SpecError(f"missing weights for letters {missing}")
    if any(v <= 0 for v in table.values()):
        raise SpecError("letter weights must be positive")
    return table


def independence_pressure(spec: SubshiftSpec, weights,
                          caps: WorkCaps = DEFAULT_CAPS):
    """Exact limiting pressure for a single-site weight function.

    Same cycle optimization with each cell scored by the total weight of
    its letters; candidate reduction stays sound because enlarging a cell
    by free letters adds positive mass.
    """
    table = _letter_weights(spec, weights)

    def mass(mask):
        total = Fraction(0)
        for i in range(spec.sigma):
            if mask >> i & 1:
                total += table[i]
        return total

    graph = build_window_graph(spec, universe="candidates", caps=caps)
    ratio, span, cyc_verts, cyc_masks = _best_cycle(graph, mass)
    word = canonical_rotation(cyc_masks)
    total = Fraction(1)
    for m in word:
        total *= mass(m)
    if compare_log_means(total, len(word), ratio, span) != 0:
        raise AssertionError("pressure witness does not achieve the optimum")
    cycle = MaximizingCycle(word=word, score=independence_score(word),
                            simple=len(set(cyc_verts)) == len(cyc_verts))
    return RationalScore.of(total, len(word)), cycle
