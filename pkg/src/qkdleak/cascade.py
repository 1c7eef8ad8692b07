"""Cascade information reconciliation with a full parity-disclosure ledger.

Forward reconciliation: Bob corrects his string toward Alice's.  Beyond
fixing errors, the module records every parity bit Alice discloses as an
ordered multiset of index subsets (the transcript).  Downstream leakage
accounting consumes that transcript directly; each disclosed parity counts
as exactly one leaked bit, with no linear-independence reduction.

Schedule: the classic four-pass variant.  Pass-1 block size is
ceil(0.73 / qber_estimate) clamped to [2, N/2], block sizes double each
pass, and the bit order is reshuffled uniformly (seeded) before every pass
after the first.  Odd-parity blocks are fixed by binary search; each fix
re-opens the containing blocks of earlier passes (back-correction),
smallest block first.  Every parity query is charged, including repeats
of a previously announced sub-block during back-correction; the ledger
mirrors the conversation, not the distinct-parity set.

Transcript dump format (see dump_transcript): a header line
``n=<N> seed=<SEED>`` followed by one line per disclosed block,
``<length> <sorted indices separated by spaces>``, in disclosure order.
"""

from __future__ import annotations

import hashlib
import heapq
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, IO, Iterable, Mapping

import numpy as np

__all__ = [
    "CascadeConfig",
    "CascadeResult",
    "Transcript",
    "BlockHistogram",
    "reconcile",
    "histogram",
    "leaked_all",
    "default_block_rule",
    "dump_transcript",
    "load_transcript",
]

log = logging.getLogger(__name__)


def default_block_rule(qber_estimate: float, n: int) -> int:
    """Pass-1 block size: ceil(0.73 / e), clamped to [2, n/2].

    A zero estimate is clamped to 1/n (one expected error) and logged,
    since a literal zero would demand an infinite block.
    """
    e = qber_estimate
    if e <= 0.0:
        log.info("qber_estimate %.3g clamped to 1/%d for block sizing", e, n)
        e = 1.0 / n
    e = max(e, 1.0 / n)
    k = math.ceil(0.73 / e)
    return int(min(max(k, 2), max(2, n // 2)))


@dataclass(frozen=True)
class CascadeConfig:
    """Knobs for one reconciliation run.

    initial_block_rule maps (qber_estimate, n) to the pass-1 block size;
    None selects default_block_rule.  verify_final appends a whole-string
    hash comparison after the last pass (outside the leakage ledger).
    """

    passes: int = 4
    seed: int = 0
    verify_final: bool = True
    initial_block_rule: Callable[[float, int], int] | None = None


@dataclass
class Transcript:
    """Ordered multiset of disclosed parity blocks over a length-n string.

    Each entry is an array of bit indices; one entry = one leaked bit.
    Entries appear in disclosure order and may repeat as sets across
    passes (multiset semantics).
    """

    n: int
    blocks: list[np.ndarray] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class BlockHistogram:
    """Counts of disclosed blocks keyed by block length.

    Counts are floats: histograms averaged over seeds or rescaled to a
    target total leakage have fractional entries.
    """

    n: int
    counts: Mapping[int, float]

    def total(self) -> float:
        """Total number of disclosed parity bits (the leakage)."""
        return float(sum(self.counts.values()))

    def scaled(self, factor: float) -> "BlockHistogram":
        """Return a copy with every count multiplied by factor."""
        if factor < 0.0:
            raise ValueError(f"scale factor must be >= 0, got {factor}")
        return BlockHistogram(self.n, {l: c * factor for l, c in self.counts.items()})


@dataclass
class CascadeResult:
    corrected: np.ndarray
    transcript: Transcript
    corrections: int
    verified: bool | None  # None when verification was disabled


def histogram(transcript: Transcript) -> BlockHistogram:
    """Block-length histogram of a transcript; total() == len(transcript)."""
    counts = Counter(int(b.size) for b in transcript.blocks)
    return BlockHistogram(transcript.n, {l: float(c) for l, c in sorted(counts.items())})


def leaked_all(transcript: Transcript) -> int:
    """Total leaked bits: one per disclosed parity, multiset counting."""
    return len(transcript.blocks)


class _Pass:
    """One pass of the schedule: a bit order and its partition into blocks."""

    __slots__ = ("index", "order", "starts", "block_of", "mism", "alice_prefix")

    def __init__(self, index: int, order: np.ndarray, block_size: int, alice: np.ndarray):
        n = order.size
        self.index = index
        self.order = order
        self.starts = np.arange(0, n + 1, block_size, dtype=np.int64)
        if self.starts[-1] != n:  # last block absorbs the remainder, shorter
            self.starts = np.append(self.starts, n)
        # rank of each bit inside this pass -> enclosing block id
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.arange(n, dtype=np.int64)
        self.block_of = np.searchsorted(self.starts, rank, side="right") - 1
        # prefix parity of Alice's string in pass order; parity of [lo, hi)
        # is (alice_prefix[hi] - alice_prefix[lo]) & 1
        self.alice_prefix = np.concatenate(
            ([0], np.cumsum(alice[order], dtype=np.int64))
        )
        self.mism = np.zeros(len(self.starts) - 1, dtype=bool)

    @property
    def n_blocks(self) -> int:
        return len(self.starts) - 1

    def bounds(self, j: int) -> tuple[int, int]:
        return int(self.starts[j]), int(self.starts[j + 1])


class _Session:
    """Mutable state of one reconciliation run."""

    def __init__(self, alice: np.ndarray, bob: np.ndarray, config: CascadeConfig):
        self.alice = alice
        self.bob = bob.copy()
        self.diff = (alice ^ self.bob).astype(np.uint8)
        self.config = config
        self.transcript = Transcript(n=int(alice.size))
        self.passes: list[_Pass] = []
        self.heap: list[tuple[int, int, int]] = []
        self.corrections = 0
        self.rng = np.random.default_rng(config.seed)

    # -- disclosure bookkeeping ------------------------------------------

    def _disclose(self, p: _Pass, lo: int, hi: int) -> None:
        # Multiset ledger: a parity announced twice (e.g. the same prefix
        # re-queried while back-correcting) is charged twice.
        self.transcript.blocks.append(p.order[lo:hi])

    def _mismatch(self, p: _Pass, lo: int, hi: int) -> bool:
        """Alice's disclosed parity vs Bob's own, i.e. parity of a^b."""
        return bool(int(self.diff[p.order[lo:hi]].sum()) & 1)

    # -- protocol steps ---------------------------------------------------

    def open_pass(self, index: int, order: np.ndarray, block_size: int) -> None:
        p = _Pass(index, order, block_size, self.alice)
        self.passes.append(p)
        # Alice discloses every top-level block parity of the new pass
        diff_in_order = self.diff[order]
        sums = np.add.reduceat(diff_in_order.astype(np.int64), p.starts[:-1])
        p.mism[:] = (sums & 1).astype(bool)
        for j in range(p.n_blocks):
            lo, hi = p.bounds(j)
            self._disclose(p, lo, hi)
            if p.mism[j]:
                heapq.heappush(self.heap, (hi - lo, p.index, j))

    def drain(self) -> None:
        """Fix odd blocks (smallest first) until every known block is even."""
        while self.heap:
            _, pi, j = heapq.heappop(self.heap)
            p = self.passes[pi]
            if not p.mism[j]:
                continue  # stale entry; block already evened out
            lo, hi = p.bounds(j)
            self._flip(self._binary_search(p, lo, hi))

    def _binary_search(self, p: _Pass, lo: int, hi: int) -> int:
        """Locate one error inside an odd block of pass p.

        Each step discloses the parity of the first half; the second
        half's parity is inferred and costs nothing.
        """
        while hi - lo > 1:
            mid = lo + (hi - lo + 1) // 2  # first half takes the odd element
            self._disclose(p, lo, mid)
            if self._mismatch(p, lo, mid):
                hi = mid
            else:
                lo = mid
        return int(p.order[lo])

    def _flip(self, i: int) -> None:
        self.bob[i] ^= 1
        self.diff[i] ^= 1
        self.corrections += 1
        for p in self.passes:
            j = int(p.block_of[i])
            p.mism[j] = not p.mism[j]
            if p.mism[j]:
                lo, hi = p.bounds(j)
                heapq.heappush(self.heap, (hi - lo, p.index, j))


def _as_bits(x: np.ndarray | Iterable[int], name: str) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-d bit array")
    arr = arr.astype(np.uint8, copy=False)
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError(f"{name} must contain only 0/1 values")
    return arr


def reconcile(
    alice: np.ndarray | Iterable[int],
    bob: np.ndarray | Iterable[int],
    qber_estimate: float,
    config: CascadeConfig = CascadeConfig(),
) -> CascadeResult:
    """Run Cascade and return Bob's corrected string plus the transcript.

    Deterministic: identical inputs and config.seed reproduce the
    transcript bit for bit.  With verify_final, a hash of the corrected
    string is compared against Alice's; a mismatch is reported via the
    result (verified=False) and a warning, never silently dropped.

    Raises:
        ValueError: on length mismatch, non-bit values, or an estimate
            outside [0, 0.5).
    """
    a = _as_bits(alice, "alice")
    b = _as_bits(bob, "bob")
    if a.size != b.size:
        raise ValueError(f"length mismatch: alice has {a.size} bits, bob {b.size}")
    n = int(a.size)
    if n < 2:
        raise ValueError("reconciliation needs at least 2 bits")
    if not 0.0 <= qber_estimate < 0.5:
        raise ValueError(f"qber_estimate must be in [0, 0.5), got {qber_estimate}")
    if config.passes < 1:
        raise ValueError(f"config.passes must be >= 1, got {config.passes}")

    rule = config.initial_block_rule or default_block_rule
    k1 = int(rule(qber_estimate, n))
    if not 2 <= k1 <= n:
        raise ValueError(f"initial block size {k1} outside [2, {n}]")

    session = _Session(a, b, config)
    for i in range(config.passes):
        k = min(k1 * (2**i), n)
        if i == 0:
            order = np.arange(n, dtype=np.int64)
        else:
            order = session.rng.permutation(n).astype(np.int64)
        session.open_pass(i, order, k)
        session.drain()

    verified: bool | None = None
    if config.verify_final:
        verified = (
            hashlib.sha256(np.packbits(a).tobytes()).digest()
            == hashlib.sha256(np.packbits(session.bob).tobytes()).digest()
        )
        if not verified:
            log.warning(
                "verification failed after %d passes (seed=%d, n=%d, %d corrections)",
                config.passes,
                config.seed,
                n,
                session.corrections,
            )
    return CascadeResult(
        corrected=session.bob,
        transcript=session.transcript,
        corrections=session.corrections,
        verified=verified,
    )


def dump_transcript(transcript: Transcript, fh: IO[str], seed: int) -> None:
    """Write a transcript in the documented text format (sorted indices)."""
    fh.write(f"n={transcript.n} seed={seed}\n")
    for block in transcript.blocks:
        idx = np.sort(block)
        fh.write(f"{idx.size} " + " ".join(str(int(i)) for i in idx) + "\n")


def load_transcript(fh: IO[str]) -> tuple[Transcript, int]:
    """Inverse of dump_transcript; returns (transcript, seed)."""
    header = fh.readline().strip()
    try:
        fields = dict(part.split("=", 1) for part in header.split())
        n, seed = int(fields["n"]), int(fields["seed"])
    except (ValueError, KeyError) as exc:
        raise ValueError(f"bad transcript header: {header!r}") from exc
    blocks = []
    for line_no, line in enumerate(fh, start=2):
        parts = line.split()
        if not parts:
            continue
        length, idx = int(parts[0]), np.array([int(t) for t in parts[1:]], dtype=np.int64)
        if idx.size != length:
            raise ValueError(f"line {line_no}: declared length {length}, got {idx.size} indices")
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise ValueError(f"line {line_no}: index out of range for n={n}")
        blocks.append(idx)
    return Transcript(n=n, blocks=blocks), seed
