"""Brute-force multi-string BWT and its inverse.

Ground truth for the tests: a comparison sort over all suffixes, never
used by the construction pipeline. Suffixes live inside their own
string (each string is terminated by its own sentinel), identical
suffixes from different strings keep collection order, and the entry
for a suffix starting at position 0 is the sentinel.
"""

from __future__ import annotations

from .alphabet import SENTINEL, StringCollection, SymbolMap, ingest
from .errors import GrlbwtError


class InvertError(GrlbwtError, ValueError):
    """The symbol vector is not a valid multi-string BWT."""


def bcr_bwt_naive(collection: StringCollection) -> tuple[list[int], SymbolMap]:
    """Sort every suffix of every sentinel-terminated string and read the left symbols."""
    text, symbol_map = ingest(collection)
    rows = []
    offset = 0
    for u, s in enumerate(collection.strings):
        m = len(s) + 1
        unit = text.symbols[offset : offset + m]
        for i in range(m):
            # Every suffix ends with the sentinel, so plain tuple order never
            # has to break a proper-prefix tie; equal suffixes fall back to
            # string order, then to position for determinism.
            rows.append((tuple(unit[i:]), u, i, unit[i - 1] if i else SENTINEL))
        offset += m
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return [r[3] for r in rows], symbol_map


def bcr_bwt_symbols(collection: StringCollection) -> list[int]:
    return bcr_bwt_naive(collection)[0]


def invert_bcr(bwt: list[int], k: int) -> list[list[int]]:
    """Rebuild the collection (as symbol strings, sentinels stripped) from its BWT."""
    n = len(bwt)
    if k < 1 or n < 2 * k:
        raise InvertError(f"BWT of length {n} cannot encode {k} strings")
    max_sym = max(bwt)
    counts = [0] * (max_sym + 1)
    for s in bwt:
        if s < SENTINEL:
            raise InvertError(f"symbol {s} is not a valid text symbol")
        counts[s] += 1
    if counts[SENTINEL] != k:
        raise InvertError(f"expected {k} sentinels, found {counts[SENTINEL]}")

    starts = [0] * (max_sym + 2)
    acc = 0
    for s in range(1, max_sym + 1):
        starts[s] = acc
        acc += counts[s]

    # lf[j] = position of the symbol preceding row j's suffix; ties among
    # equal symbols resolve by BWT position order.
    lf = [0] * n
    seen = [0] * (max_sym + 1)
    for j, s in enumerate(bwt):
        lf[j] = starts[s] + seen[s]
        seen[s] += 1

    strings: list[list[int]] = []
    for u in range(k):
        out: list[int] = []
        j = u
        for _ in range(n + 1):
            s = bwt[j]
            if s == SENTINEL:
                break
            out.append(s)
            j = lf[j]
        else:
            raise InvertError("LF walk did not terminate; BWT is malformed")
        out.reverse()
        if not out:
            raise InvertError(f"string {u} decoded empty")
        strings.append(out)
    return strings


def invert_to_collection(bwt: list[int], k: int, symbol_map: SymbolMap) -> StringCollection:
    return StringCollection(tuple(symbol_map.decode(s) for s in invert_bcr(bwt, k)))
