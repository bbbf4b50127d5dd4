"""The diagonal maximizing field on finite boxes, and sampling from it.

The limiting measure of maximal entropy attached to a maximizing cycle
draws a uniform phase r, lays down the field cell(g) = word[(r + sum g)
mod m] on the box, and then fills every site independently and uniformly
inside its cell. Every axis-parallel line of the field reads a rotation
of the cycle, so samples are legal by construction; the sampler still
re-verifies every sample against the forbidden list as a hard check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ExactScore,
    SpecError,
    SubshiftSpec,
    check_set_word,
    independence_score,
    mask_bits,
    mask_size,
)
from .automaton import forbidden_fit

RNG_ALGORITHM = "numpy-pcg64-seedseq"


def _box_coords(n: int, d: int):
    strides = [n ** (d - 1 - i) for i in range(d)]
    return strides, n ** d


@dataclass(frozen=True)
class MaximizingBoxField:
    """Set-letter field cell(g) = word[(phase + sum g) mod m] on [0,n-1]^d."""

    word: tuple[int, ...]
    phase: int
    n: int
    d: int
    cells: tuple[int, ...]  # lexicographic site order

    def residue_classes(self):
        """Site indices grouped by (phase + sum of coordinates) mod m."""
        m = len(self.word)
        strides, total = _box_coords(self.n, self.d)
        groups = [[] for _ in range(m)]
        for p in range(total):
            s = sum((p // st) % self.n for st in strides)
            groups[(self.phase + s) % m].append(p)
        return groups


def maximizing_point_box(spec: SubshiftSpec, word, phase: int, n: int, d: int) -> MaximizingBoxField:
    """Materialize the diagonal field on a box and validate its lines."""
    word = check_set_word(word, spec.sigma)
    m = len(word)
    if not 0 <= phase < m:
        raise SpecError(f"phase must lie in 0..{m - 1}")
    if n < 1 or d < 1:
        raise SpecError("box needs n >= 1 and d >= 1")
    strides, total = _box_coords(n, d)
    cells = []
    for p in range(total):
        s = sum((p // st) % n for st in strides)
        cells.append(word[(phase + s) % m])
    field = MaximizingBoxField(word, phase, n, d, tuple(cells))
    for line in _axis_lines(n, d):
        if forbidden_fit([cells[p] for p in line], spec.forbidden) is not None:
            raise SpecError("field line admits a forbidden selection; "
                            "the cycle word is not legal for this spec")
    return field


def _axis_lines(n: int, d: int):
    """Site-index lists of all axis-parallel lines of the box."""
    strides, total = _box_coords(n, d)
    for axis in range(d):
        st = strides[axis]
        for base in range(total):
            if (base // st) % n == 0:
                yield [base + j * st for j in range(n)]


@dataclass(frozen=True)
class SampleBatch:
    spec: SubshiftSpec
    word: tuple[int, ...]
    n: int
    d: int
    seed: int
    count: int
    algorithm: str
    phases: tuple[int, ...]
    configurations: tuple[tuple[int, ...], ...]  # letter indices, site order
    violations: int


def sample_box(spec: SubshiftSpec, word, n: int, d: int, seed: int, count: int) -> SampleBatch:
    """Draw `count` boxes from the phase-uniform, cell-uniform measure.

    Deterministic given the seed: sample i uses the i-th spawn of
    numpy's SeedSequence(seed), so the stream is reproducible and
    parallelizable per sample. Every sample is re-checked against the
    forbidden list along every axis (raises on violation).
    """
    word = check_set_word(word, spec.sigma)
    if count < 1:
        raise SpecError("need count >= 1")
    m = len(word)
    strides, total = _box_coords(n, d)
    sums = [sum((p // st) % n for st in strides) for p in range(total)]
    bits_of = {mask: mask_bits(mask) for mask in set(word)}
    lines = list(_axis_lines(n, d))
    children = np.random.SeedSequence(seed).spawn(count)
    phases = []
    configs = []
    for child in children:
        rng = np.random.Generator(np.random.PCG64(child))
        r = int(rng.integers(m))
        phases.append(r)
        sample = []
        for p in range(total):
            bits = bits_of[word[(r + sums[p]) % m]]
            sample.append(bits[int(rng.integers(len(bits)))] if len(bits) > 1 else bits[0])
        mask_word = [1 << a for a in sample]
        for line in lines:
            if forbidden_fit([mask_word[p] for p in line], spec.forbidden) is not None:
                raise AssertionError("sampler produced an illegal configuration")
        configs.append(tuple(sample))
    return SampleBatch(spec=spec, word=word, n=n, d=d, seed=seed, count=count,
                       algorithm=RNG_ALGORITHM, phases=tuple(phases),
                       configurations=tuple(configs), violations=0)


@dataclass(frozen=True)
class BatchStats:
    mean_log_cell_size: ExactScore   # exact, for the phase-0 field
    site_frequencies: tuple[dict, ...]
    mean_site_entropy: float         # plug-in Shannon estimate, nats
    multi_site_letter_freq: dict     # letter -> frequency over |cell| >= 2 sites
    parity_constant_rate: float      # samples with a letter constant on one parity class
    violations: int


def empirical_stats(batch: SampleBatch) -> BatchStats:
    """Summary statistics; the mean log cell size is exact, the rest empirical."""
    m = len(batch.word)
    strides, total = _box_coords(batch.n, batch.d)
    sums = [sum((p // st) % batch.n for st in strides) for p in range(total)]
    field0 = [batch.word[s % m] for s in sums]
    exact = independence_score(field0)

    counts = [dict() for _ in range(total)]
    for cfg in batch.configurations:
        for p, a in enumerate(cfg):
            counts[p][a] = counts[p].get(a, 0) + 1
    freqs = tuple(
        {a: c / batch.count for a, c in site.items()} for site in counts
    )
    mean_entropy = sum(
        -sum(f * math.log(f) for f in site.values()) for site in freqs
    ) / total

    multi = {}
    multi_total = 0
    for cfg, r in zip(batch.configurations, batch.phases):
        for p, a in enumerate(cfg):
            if mask_size(batch.word[(r + sums[p]) % m]) >= 2:
                multi[a] = multi.get(a, 0) + 1
                multi_total += 1
    multi_freq = {a: c / multi_total for a, c in multi.items()} if multi_total else {}

    par_hits = 0
    classes = [[p for p in range(total) if sums[p] % 2 == 0],
               [p for p in range(total) if sums[p] % 2 == 1]]
    for cfg in batch.configurations:
        if any(cls and len({cfg[p] for p in cls}) == 1 for cls in classes):
            par_hits += 1

    return BatchStats(
        mean_log_cell_size=exact,
        site_frequencies=freqs,
        mean_site_entropy=mean_entropy,
        multi_site_letter_freq=multi_freq,
        parity_constant_rate=par_hits / batch.count,
        violations=batch.violations,
    )
