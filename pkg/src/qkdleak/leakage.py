"""Separating reconciliation leakage into useful and useless parts.

A parity block whose bits all originate from multi-photon pulses tells an
eavesdropper who already holds those photons nothing new.  Given per-bit
photon-class tags, the transcript splits into the fully-multi-photon
blocks and the rest; only the rest counts as leakage useful to the
adversary.  This module provides the exact set construction on tagged
strings, the closed-form expectation of the multi-photon block count under
i.i.d. tags, and the upper bound on useful leakage used by the key-rate
formulas, which needs only a lower bound on the multi-photon fraction.

Tag codes: VACUUM=0, SINGLE=1, MULTI=2 (stored in int8 arrays).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .cascade import BlockHistogram, Transcript

__all__ = [
    "VACUUM",
    "SINGLE",
    "MULTI",
    "sample_tags",
    "GroupingResult",
    "virtual_grouping",
    "FlatBlocks",
    "expected_leaked_multi",
    "leaked_useful_bound",
    "LeakageBreakdown",
    "leakage_breakdown",
    "SkrBreakdown",
]

log = logging.getLogger(__name__)

VACUUM, SINGLE, MULTI = 0, 1, 2


def sample_tags(n: int, p_vacuum: float, p_single: float, seed: int) -> np.ndarray:
    """Draw n i.i.d. photon-class tags with the given class probabilities.

    The multi-photon probability is the complement 1 - p_vacuum - p_single.

    Raises:
        ValueError: if the probabilities are negative or sum above 1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p_vacuum < 0.0 or p_single < 0.0 or p_vacuum + p_single > 1.0 + 1e-9:
        raise ValueError(
            f"invalid probability vector: p_vacuum={p_vacuum}, p_single={p_single}"
        )
    p_multi = max(0.0, 1.0 - p_vacuum - p_single)
    total = p_vacuum + p_single + p_multi
    rng = np.random.default_rng(seed)
    return rng.choice(
        np.array([VACUUM, SINGLE, MULTI], dtype=np.int8),
        size=n,
        p=[p_vacuum / total, p_single / total, p_multi / total],
    )


@dataclass
class GroupingResult:
    """Exact split of a transcript against a tagged bit string.

    multi_blocks: blocks fully contained in the multi-photon index set.
    a_multi: union of those blocks (sorted indices).
    other_blocks: remaining blocks with a_multi indices removed; empties
        are discarded (none can occur: a block outside multi_blocks keeps
        at least one non-multi index by construction).
    """

    n_blocks: int
    multi_blocks: list[np.ndarray]
    a_multi: np.ndarray
    other_blocks: list[np.ndarray]

    @property
    def n_multi(self) -> int:
        return len(self.multi_blocks)

    @property
    def n_other(self) -> int:
        return len(self.other_blocks)


def virtual_grouping(transcript: Transcript, tags: np.ndarray) -> GroupingResult:
    """Regroup disclosed blocks around the multi-photon positions.

    A block belongs to the multi group iff every index it touches is
    tagged MULTI.  The union of those blocks is removed from all other
    blocks; survivors form the "other" group, whose parities are the ones
    an eavesdropper can still use.
    """
    tags = np.asarray(tags)
    if tags.shape != (transcript.n,):
        raise ValueError(
            f"tags shape {tags.shape} does not match transcript n={transcript.n}"
        )
    is_multi = tags == MULTI
    multi_blocks: list[np.ndarray] = []
    rest: list[np.ndarray] = []
    for block in transcript.blocks:
        if is_multi[block].all():
            multi_blocks.append(block)
        else:
            rest.append(block)
    in_a_multi = np.zeros(transcript.n, dtype=bool)
    for block in multi_blocks:
        in_a_multi[block] = True
    other_blocks = []
    for block in rest:
        kept = block[~in_a_multi[block]]
        if kept.size:  # defensive: empty survivors are discarded
            other_blocks.append(kept)
    return GroupingResult(
        n_blocks=len(transcript.blocks),
        multi_blocks=multi_blocks,
        a_multi=np.flatnonzero(in_a_multi),
        other_blocks=other_blocks,
    )


class FlatBlocks:
    """Concatenated-index view of a transcript for fast repeated tagging.

    Monte-Carlo resampling asks "how many blocks of each length are fully
    multi-photon?" hundreds of times against one fixed transcript; this
    answers without rebuilding per-block sets.  Equivalence with
    virtual_grouping is part of the test suite.
    """

    def __init__(self, transcript: Transcript):
        blocks = transcript.blocks
        self.n = transcript.n
        self.lengths = np.array([b.size for b in blocks], dtype=np.int64)
        self.offsets = np.concatenate(([0], np.cumsum(self.lengths)[:-1])) if blocks else np.zeros(0, np.int64)
        self.flat = np.concatenate(blocks) if blocks else np.zeros(0, np.int64)

    def multi_counts_by_length(self, tags: np.ndarray) -> dict[int, int]:
        """Number of fully-MULTI blocks, keyed by block length."""
        if self.lengths.size == 0:
            return {}
        hits = np.add.reduceat((tags[self.flat] == MULTI).astype(np.int64), self.offsets)
        full = self.lengths[hits == self.lengths]
        lengths, counts = np.unique(full, return_counts=True)
        return {int(l): int(c) for l, c in zip(lengths, counts)}

    def n_multi(self, tags: np.ndarray) -> int:
        if self.lengths.size == 0:
            return 0
        hits = np.add.reduceat((tags[self.flat] == MULTI).astype(np.int64), self.offsets)
        return int(np.count_nonzero(hits == self.lengths))


def expected_leaked_multi(hist: BlockHistogram, delta_multi: float) -> float:
    """Expected number of fully-multi-photon blocks under i.i.d. tags.

    Each length-l block is fully multi with probability delta_multi^l, so
    the expectation is sum_l count_l * delta_multi^l.
    """
    if not 0.0 <= delta_multi <= 1.0:
        raise ValueError(f"delta_multi must be in [0, 1], got {delta_multi}")
    return float(sum(c * delta_multi**l for l, c in hist.counts.items()))


def leaked_useful_bound(hist: BlockHistogram, delta_multi_min: float) -> float:
    """Upper bound on the leakage useful to an eavesdropper.

    sum_l count_l * min(1 - delta_multi_min^l, 1); valid whenever the true
    multi-photon fraction is at least delta_multi_min.
    """
    if not 0.0 <= delta_multi_min <= 1.0:
        raise ValueError(f"delta_multi_min must be in [0, 1], got {delta_multi_min}")
    return float(
        sum(c * min(1.0 - delta_multi_min**l, 1.0) for l, c in hist.counts.items())
    )


@dataclass(frozen=True)
class LeakageBreakdown:
    """Leakage ledger for one histogram at one multi-photon lower bound."""

    leaked_all: float
    leaked_multi: float  # expected mass forgiven: sum_l count_l * delta^l
    leaked_useful: float  # bound actually charged against the key


def leakage_breakdown(hist: BlockHistogram, delta_multi_min: float) -> LeakageBreakdown:
    return LeakageBreakdown(
        leaked_all=hist.total(),
        leaked_multi=expected_leaked_multi(hist, delta_multi_min),
        leaked_useful=leaked_useful_bound(hist, delta_multi_min),
    )


@dataclass(frozen=True)
class SkrBreakdown:
    """Secret-key-rate comparison at one operating point.

    Rates are per pulse.  Leakage fields are per reconciled bit.
    improvement_ratio is r_improved/r_original - 1; inf when only the
    improved rate is positive, nan when both are zero.
    """

    r_original: float
    r_improved: float
    leaked_all_per_bit: float
    leaked_multi_per_bit: float
    leaked_useful_per_bit: float
    delta_multi_min: float

    @property
    def improvement_ratio(self) -> float:
        if self.r_original > 0.0:
            return self.r_improved / self.r_original - 1.0
        return float("inf") if self.r_improved > 0.0 else float("nan")
