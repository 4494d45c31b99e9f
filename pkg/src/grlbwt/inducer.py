"""The induction phase: filling the EMPTY entries of each partial BWT.

Scanning the next level's BWT run by run, each symbol's phrase is
decompressed through the pointer chain of the compressed dictionary,
appending left contexts to per-rank buckets; the chain terminal replaces
the run's symbol. The merge then interleaves the partial BWT, the
transformed runs, and the buckets. All bookkeeping is per run, so highly
repetitive inputs stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alphabet import DUMMY, TextLevel
from .errors import CorruptionError
from .parser import CompressedDict
from .rle import EMPTY, RunCursor, RunSequence


@dataclass
class SizingInfo:
    """First-pass summary: bucket capacities, run-slot counts, symbol presence."""

    capacities: list[int]  # per rank: length of its EMPTY entry
    run_slots: list[int]  # per rank: appends the induction will make
    occurs_in_bwt_next: bytearray  # per rank: symbol occurs in the next BWT
    chains: dict  # rank -> (tuple of (bucket, left) steps, terminal symbol)
    walk_steps: int = 0  # chain links visited while filling the cache


class InductionBuckets:
    """Per-rank run-length buckets; DUMMY runs mark spots taken from the next BWT."""

    __slots__ = ("buckets", "capacities", "filled")

    def __init__(self, sigma_next: int, capacities: list[int]):
        self.buckets: list[list[tuple[int, int]]] = [[] for _ in range(sigma_next + 1)]
        self.capacities = capacities
        self.filled = [0] * (sigma_next + 1)

    def append(self, rank: int, symbol: int, length: int) -> None:
        bucket = self.buckets[rank]
        if bucket and bucket[-1][0] == symbol:
            bucket[-1] = (symbol, bucket[-1][1] + length)
        else:
            bucket.append((symbol, length))
        self.filled[rank] += length
        if self.filled[rank] > self.capacities[rank]:
            raise CorruptionError(f"bucket {rank} overflows its sized capacity")


def base_bwt(final_level: TextLevel) -> RunSequence:
    """The last level's BWT is the text itself, one symbol per string."""
    if final_level.n != final_level.k:
        raise ValueError(
            f"base BWT needs one symbol per string, got {final_level.n} for k={final_level.k}"
        )
    seq = RunSequence()
    for s in final_level.symbols:
        seq.append_run(s, 1)
    return seq


def _walk_chain(cdict: CompressedDict, rank: int):
    steps = []
    cur = rank
    for _ in range(cdict.sigma_next + 1):
        left, nxt, terminal = cdict.pair(cur)
        if terminal:
            return tuple(steps), nxt
        steps.append((nxt, left))
        cur = nxt
    raise CorruptionError(f"pointer chain starting at rank {rank} does not terminate")


def size_buckets(bwt_next_runs, cdict: CompressedDict, pbwt: RunSequence) -> SizingInfo:
    """One pass over the next BWT's runs, walking each distinct symbol's chain once."""
    sigma_next = cdict.sigma_next
    capacities = [0] * (sigma_next + 1)
    b = 0
    for sym, length in pbwt.iterate_runs():
        if sym == EMPTY:
            b += 1
            capacities[b] = length
    if b != sigma_next:
        raise CorruptionError(f"partial BWT has {b} EMPTY entries, expected {sigma_next}")

    run_slots = [0] * (sigma_next + 1)
    occurs = bytearray(sigma_next + 1)
    chains: dict = {}
    proper = cdict.proper_suffix_flags
    walk_steps = 0
    for sym, _length in bwt_next_runs:
        occurs[sym] = 1
        cached = chains.get(sym)
        if cached is None:
            cached = _walk_chain(cdict, sym)
            chains[sym] = cached
            walk_steps += len(cached[0]) + 1
        if proper[sym]:
            run_slots[sym] += 1
        for bucket, _left in cached[0]:
            run_slots[bucket] += 1
    return SizingInfo(capacities, run_slots, occurs, chains, walk_steps)


def induce(
    bwt_next_runs, cdict: CompressedDict, sizing: SizingInfo
) -> tuple[InductionBuckets, RunSequence]:
    """Fill the buckets and rewrite the next BWT's symbols to their terminals."""
    buckets = InductionBuckets(cdict.sigma_next, sizing.capacities)
    append = buckets.append
    transformed = RunSequence()
    proper = cdict.proper_suffix_flags
    chains = sizing.chains
    for sym, length in bwt_next_runs:
        steps, terminal = chains[sym]
        if proper[sym]:
            append(sym, DUMMY, length)
        for bucket, left in steps:
            append(bucket, left, length)
        transformed.append_run(terminal, length)
    return buckets, transformed


def merge(
    pbwt: RunSequence,
    transformed,
    buckets: InductionBuckets,
    cdict: CompressedDict,
    occurs_in_bwt_next: bytearray,
    out: RunSequence | None = None,
) -> RunSequence:
    """Complete the partial BWT.

    Filled runs are copied. The b-th EMPTY entry of length l is resolved by:
    copying l symbols of `transformed` when the rank never occurs as a proper
    suffix; emitting bucket b with DUMMY runs swapped for `transformed`
    symbols when it does and the rank occurs in the next BWT; or emitting
    bucket b verbatim for ranks that were only added by expansion.
    """
    proper = cdict.proper_suffix_flags
    if out is None:
        out = RunSequence()
    emit = out.append_run
    cursor = RunCursor(transformed.iterate_runs() if isinstance(transformed, RunSequence) else transformed)
    rank = 0
    for sym, length in pbwt.iterate_runs():
        if sym != EMPTY:
            emit(sym, length)
            continue
        rank += 1
        if not proper[rank]:
            for s, x in cursor.take(length):
                emit(s, x)
        else:
            emitted = 0
            allow_dummy = bool(occurs_in_bwt_next[rank])
            for s, x in buckets.buckets[rank]:
                if s == DUMMY:
                    if not allow_dummy:
                        raise CorruptionError(
                            f"expansion-only bucket {rank} contains DUMMY entries"
                        )
                    for ts, tx in cursor.take(x):
                        emit(ts, tx)
                else:
                    emit(s, x)
                emitted += x
            if emitted != length:
                raise CorruptionError(
                    f"bucket {rank} emitted {emitted} symbols for an entry of length {length}"
                )
            buckets.buckets[rank] = []
    if rank != cdict.sigma_next:
        raise CorruptionError(f"merge saw {rank} EMPTY entries, expected {cdict.sigma_next}")
    if not cursor.exhausted():
        raise CorruptionError("transformed symbols left over after merge")
    if out.total != pbwt.total:
        raise CorruptionError(
            f"merged BWT totals {out.total}, expected {pbwt.total}"
        )
    return out


def induction_round(pbwt: RunSequence, cdict: CompressedDict, bwt_next_runs_factory):
    """Run one full induction round; the factory yields fresh run iterators."""
    sizing = size_buckets(bwt_next_runs_factory(), cdict, pbwt)
    buckets, transformed = induce(bwt_next_runs_factory(), cdict, sizing)
    bwt = merge(pbwt, transformed, buckets, cdict, sizing.occurs_in_bwt_next)
    return bwt, sizing
