"""Run-length sequences.

A RunSequence stores maximal equal-symbol runs as (symbol, length) pairs.
Symbol 0 (EMPTY) is reserved for entries that are not yet decided: a
partial BWT keeps one run per undecided entry, so EMPTY runs are appended
without merging and adjacent EMPTY runs stay distinct.
"""

from __future__ import annotations

EMPTY = 0


class RunSequence:
    """Ordered (symbol, length) runs with total length bookkeeping."""

    __slots__ = ("runs", "total")

    def __init__(self, runs=None):
        self.runs: list[tuple[int, int]] = []
        self.total = 0
        if runs:
            for symbol, length in runs:
                self.append_run(symbol, length)

    def append_run(self, symbol: int, length: int) -> None:
        """Append a run, merging with the last run when symbols match."""
        if length < 1:
            raise ValueError(f"run length must be >= 1, got {length}")
        runs = self.runs
        if runs and runs[-1][0] == symbol:
            runs[-1] = (symbol, runs[-1][1] + length)
        else:
            runs.append((symbol, length))
        self.total += length

    def append_entry(self, symbol: int, length: int) -> None:
        """Append a run as a distinct entry, never merging with the previous one."""
        if length < 1:
            raise ValueError(f"run length must be >= 1, got {length}")
        self.runs.append((symbol, length))
        self.total += length

    def iterate_runs(self):
        return iter(self.runs)

    def iterate_symbols(self):
        for symbol, length in self.runs:
            for _ in range(length):
                yield symbol

    def symbols(self) -> list[int]:
        out = []
        for symbol, length in self.runs:
            out.extend([symbol] * length)
        return out

    def run_count(self) -> int:
        return len(self.runs)

    def __len__(self) -> int:
        return self.total

    def __eq__(self, other) -> bool:
        return isinstance(other, RunSequence) and self.runs == other.runs

    def __repr__(self) -> str:
        return f"RunSequence({self.runs!r})"


def encode(symbols) -> RunSequence:
    """Run-length encode a symbol vector into maximal runs."""
    seq = RunSequence()
    for s in symbols:
        seq.append_run(s, 1)
    return seq


def decode(seq: RunSequence) -> list[int]:
    return seq.symbols()


class RunCursor:
    """Forward cursor over a run iterable, consuming a given number of symbols at a time."""

    __slots__ = ("_iter", "_symbol", "_left")

    def __init__(self, runs):
        self._iter = iter(runs)
        self._symbol = None
        self._left = 0

    def take(self, count: int):
        """Yield (symbol, length) chunks totalling exactly `count` symbols."""
        while count > 0:
            if self._left == 0:
                try:
                    self._symbol, self._left = next(self._iter)
                except StopIteration:
                    raise ValueError("run cursor exhausted early") from None
            step = self._left if self._left < count else count
            self._left -= step
            count -= step
            yield self._symbol, step

    def exhausted(self) -> bool:
        if self._left:
            return False
        try:
            self._symbol, self._left = next(self._iter)
        except StopIteration:
            return True
        return False
