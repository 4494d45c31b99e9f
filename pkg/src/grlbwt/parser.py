"""One parsing round: phrase extraction, dictionary and partial BWT
construction, dictionary compression, and the next-level text.

A right-to-left scan cuts the text at LMS positions and at unit
terminators (suffix-marked symbols). Within a unit consecutive phrases
overlap by one symbol; across a terminator they do not. The partial BWT
is read off the dictionary's generalized suffix array: ranges whose left
context is undecidable from the dictionary alone become EMPTY entries,
numbered in order, and those ordinals are the next level's alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alphabet import DUMMY, TextLevel
from .errors import CorruptionError
from .iss import LMS_TYPE, GeneralizedSA, build_generalized_sa, classify
from .rle import EMPTY, RunSequence

# Phrase table: symbols tuple -> frequency, rewritten to rank after sorting.
PhraseTable = dict


@dataclass
class Dictionary:
    """Concatenated phrase store with boundary and frequency bookkeeping."""

    store: list[int]
    bounds: list[tuple[int, int]]  # half-open (start, end) per phrase
    start_flags: bytearray  # 1 at each phrase start position
    phrase_of: list[int]  # position -> phrase index (rank-over-ones of start_flags)
    freqs: list[int]
    suffix_of_T: bytearray  # 1 iff the phrase ends with a suffix-marked symbol
    sigma: int

    @property
    def phrase_count(self) -> int:
        return len(self.bounds)

    def phrase(self, idx: int) -> tuple[int, ...]:
        s, e = self.bounds[idx]
        return tuple(self.store[s:e])

    def final_flags(self) -> bytearray:
        flags = bytearray(len(self.store))
        for _, e in self.bounds:
            flags[e - 1] = 1
        return flags

    def phrase_index(self, pos: int) -> int:
        return self.phrase_of[pos]


@dataclass
class EmptyRange:
    """One EMPTY entry of the partial BWT: an undecidable equal-suffix range."""

    rep_pos: int  # position in the store of one occurrence
    length: int  # length of the suffix string
    phrase_idx: int  # index of the phrase equal to the string, -1 if none
    has_proper: bool  # some occurrence is a proper suffix inside a phrase


@dataclass
class RankedDict:
    """Dictionary reordered by partial-BWT rank, ready for compression."""

    rank_to_phrase: list  # index by rank in [1, sigma_next], slot 0 unused
    suffix_of_T: bytearray  # per rank
    proper_suffix_flags: bytearray  # per rank: string also occurs as a proper suffix
    sigma_next: int
    sigma: int


@dataclass
class CompressedDict:
    """Two-slot encoding per rank: left context plus suffix pointer or terminal.

    nexts[b] is a rank when terminal_flags[b] is 0, otherwise a plain
    symbol of the round's alphabet. Following ranks strictly shortens the
    suffix, so every chain terminates.
    """

    lefts: list[int]
    nexts: list[int]
    terminal_flags: bytearray
    proper_suffix_flags: bytearray
    suffix_of_T: bytearray
    sigma_next: int
    sigma: int

    def pair(self, rank: int) -> tuple[int, int, bool]:
        return self.lefts[rank], self.nexts[rank], bool(self.terminal_flags[rank])


def _iter_phrase_spans(symbols, types, boundary_flags):
    """Yield inclusive (start, end) phrase spans, right to left."""
    n = len(symbols)
    r = n - 1
    if not boundary_flags[r]:
        raise CorruptionError("text does not end with a unit terminator")
    for j in range(n - 2, -1, -1):
        if boundary_flags[j]:
            yield j + 1, r
            r = j
        elif types[j] == LMS_TYPE:
            yield j, r
            r = j
    yield 0, r


def scan_phrases(text: TextLevel, types: bytearray | None = None) -> PhraseTable:
    """Count phrase occurrences in a right-to-left scan."""
    symbols = text.symbols
    bflags = text.boundary_flags()
    if types is None:
        types = classify(symbols, bflags)
    table: PhraseTable = {}
    get = table.get
    for a, b in _iter_phrase_spans(symbols, types, bflags):
        key = tuple(symbols[a : b + 1])
        table[key] = get(key, 0) + 1
    return table


def build_dictionary(table: PhraseTable, suffix_flags: bytearray, sigma: int) -> Dictionary:
    """Lay phrases out in insertion order with boundary and frequency vectors."""
    if not table:
        raise ValueError("phrase table is empty")
    store: list[int] = []
    bounds: list[tuple[int, int]] = []
    freqs: list[int] = []
    marked = bytearray()
    for phrase, freq in table.items():
        s = len(store)
        store.extend(phrase)
        bounds.append((s, len(store)))
        freqs.append(freq)
        marked.append(suffix_flags[phrase[-1]])
    start_flags = bytearray(len(store))
    phrase_of = [0] * len(store)
    for idx, (s, e) in enumerate(bounds):
        start_flags[s] = 1
        for p in range(s, e):
            phrase_of[p] = idx
    return Dictionary(store, bounds, start_flags, phrase_of, freqs, marked, sigma)


def build_pbwt(
    dic: Dictionary, sa: GeneralizedSA, suffix_flags: bytearray
) -> tuple[RunSequence, list[EmptyRange]]:
    """Scan equal-suffix ranges in order and emit filled runs or EMPTY entries.

    Length-1 ranges are dropped unless their symbol is suffix-marked,
    because that symbol is also the final symbol of the preceding phrase
    and would be counted twice. A range is EMPTY when it contains the
    start of a phrase or when its occurrences disagree on the left symbol.
    """
    store = dic.store
    starts = dic.start_flags
    phrase_of = dic.phrase_of
    freqs = dic.freqs
    bounds = dic.bounds

    pbwt = RunSequence()
    empties: list[EmptyRange] = []
    for lo, hi in sa.ranges():
        pos0 = sa.position(lo)
        pidx0 = phrase_of[pos0]
        length = bounds[pidx0][1] - pos0
        if length == 1 and not suffix_flags[store[pos0]]:
            continue
        total = 0
        start_pidx = -1
        has_proper = False
        left = -1
        same = True
        for u in range(lo, hi):
            pos = sa.position(u)
            pidx = phrase_of[pos]
            total += freqs[pidx]
            if starts[pos]:
                start_pidx = pidx
            else:
                has_proper = True
                sym = store[pos - 1]
                if left < 0:
                    left = sym
                elif sym != left:
                    same = False
        if start_pidx < 0 and same:
            pbwt.append_run(left, total)
        else:
            pbwt.append_entry(EMPTY, total)
            empties.append(EmptyRange(pos0, length, start_pidx, has_proper))
    return pbwt, empties


def expand_dictionary(
    dic: Dictionary, empties: list[EmptyRange], suffix_flags: bytearray
) -> list[int]:
    """Append EMPTY strings that are not phrases yet; return the phrase of each EMPTY."""
    empty_phrases: list[int] = []
    for e in empties:
        if e.phrase_idx >= 0:
            empty_phrases.append(e.phrase_idx)
            continue
        content = dic.store[e.rep_pos : e.rep_pos + e.length]
        s = len(dic.store)
        dic.store.extend(content)
        dic.bounds.append((s, len(dic.store)))
        dic.freqs.append(0)  # never parsed
        dic.suffix_of_T.append(suffix_flags[content[-1]])
        dic.start_flags.extend(bytes(len(content)))
        dic.start_flags[s] = 1
        idx = len(dic.bounds) - 1
        dic.phrase_of.extend([idx] * len(content))
        empty_phrases.append(idx)
    return empty_phrases


def rank_phrases(
    dic: Dictionary, empties: list[EmptyRange], empty_phrases: list[int], table: PhraseTable
) -> RankedDict:
    """Assign each phrase its EMPTY ordinal, reorder by rank, rewrite table values."""
    rank_of = [0] * dic.phrase_count
    for b, pidx in enumerate(empty_phrases, start=1):
        rank_of[pidx] = b
    if any(r == 0 for r in rank_of):
        raise CorruptionError("a phrase produced no EMPTY entry")

    sigma_next = len(empties)
    rank_to_phrase: list = [None] * (sigma_next + 1)
    suffix_of_T = bytearray(sigma_next + 1)
    proper = bytearray(sigma_next + 1)
    for pidx, b in enumerate(rank_of):
        rank_to_phrase[b] = dic.phrase(pidx)
        suffix_of_T[b] = dic.suffix_of_T[pidx]
    for b, e in enumerate(empties, start=1):
        proper[b] = 1 if e.has_proper else 0

    # The table still maps phrase content to frequency; compression destroys
    # the contents, so the values must become ranks now. Table insertion
    # order matches phrase insertion order for the parsed prefix.
    for i, key in enumerate(table):
        table[key] = rank_of[i]
    return RankedDict(rank_to_phrase, suffix_of_T, proper, sigma_next, dic.sigma)


def compress_dictionary(ranked: RankedDict) -> CompressedDict:
    """Reduce every phrase to (left context, longest ranked proper suffix or terminal)."""
    sigma_next = ranked.sigma_next
    lookup = {}
    for b in range(1, sigma_next + 1):
        if ranked.proper_suffix_flags[b]:
            lookup[ranked.rank_to_phrase[b]] = b
    lengths = sorted({len(p) for p in lookup}, reverse=True)

    lefts = [DUMMY] * (sigma_next + 1)
    nexts = [0] * (sigma_next + 1)
    terminal = bytearray(sigma_next + 1)
    for b in range(1, sigma_next + 1):
        phrase = ranked.rank_to_phrase[b]
        m = len(phrase)
        target = 0
        for length in lengths:
            if length >= m:
                continue
            hit = lookup.get(phrase[m - length :])
            if hit is not None:
                lefts[b] = phrase[m - length - 1]
                nexts[b] = hit
                target = hit
                break
        if not target:
            terminal[b] = 1
            if ranked.suffix_of_T[b] or m == 1:
                nexts[b] = phrase[-1]
            else:
                nexts[b] = phrase[-2]
    return CompressedDict(
        lefts,
        nexts,
        terminal,
        bytearray(ranked.proper_suffix_flags),
        bytearray(ranked.suffix_of_T),
        sigma_next,
        ranked.sigma,
    )


def build_parse(
    text: TextLevel,
    table: PhraseTable,
    ranked: RankedDict,
    types: bytearray | None = None,
) -> tuple[TextLevel, bool]:
    """Replace each phrase occurrence with its rank; flag the final round."""
    symbols = text.symbols
    bflags = text.boundary_flags()
    if types is None:
        types = classify(symbols, bflags)
    out: list[int] = []
    append = out.append
    for a, b in _iter_phrase_spans(symbols, types, bflags):
        key = tuple(symbols[a : b + 1])
        rank = table.get(key)
        if rank is None:
            raise CorruptionError("parse scan met a phrase missing from the table")
        append(rank)
    out.reverse()
    next_text = TextLevel(
        level=text.level + 1,
        symbols=out,
        sigma=ranked.sigma_next,
        k=text.k,
        suffix_flags=bytearray(ranked.suffix_of_T),
    )
    return next_text, len(out) == text.k


@dataclass
class RoundResult:
    """Everything one parsing round produces, plus desk-scale metrics."""

    level: int
    n: int
    sigma: int
    phrase_table: PhraseTable  # values are ranks
    pbwt: RunSequence
    cdict: CompressedDict
    rank_to_phrase: list
    suffix_flags: bytearray  # the round's input flags, kept for expansion
    dict_symbols: int
    phrase_count: int
    next_text: TextLevel = field(repr=False)
    final: bool = False

    @property
    def sigma_next(self) -> int:
        return self.cdict.sigma_next


def run_round(text: TextLevel) -> RoundResult:
    """Run a complete parsing round on one text level."""
    bflags = text.boundary_flags()
    types = classify(text.symbols, bflags)
    table = scan_phrases(text, types)
    dic = build_dictionary(table, text.suffix_flags, text.sigma)
    sa = build_generalized_sa(dic)
    pbwt, empties = build_pbwt(dic, sa, text.suffix_flags)
    if pbwt.total != text.n:
        raise CorruptionError(
            f"partial BWT totals {pbwt.total}, expected text length {text.n}"
        )
    empty_phrases = expand_dictionary(dic, empties, text.suffix_flags)
    dict_symbols = len(dic.store)
    phrase_count = dic.phrase_count
    ranked = rank_phrases(dic, empties, empty_phrases, table)
    cdict = compress_dictionary(ranked)
    next_text, final = build_parse(text, table, ranked, types)
    return RoundResult(
        level=text.level,
        n=text.n,
        sigma=text.sigma,
        phrase_table=table,
        pbwt=pbwt,
        cdict=cdict,
        rank_to_phrase=ranked.rank_to_phrase,
        suffix_flags=bytearray(text.suffix_flags),
        dict_symbols=dict_symbols,
        phrase_count=phrase_count,
        next_text=next_text,
        final=final,
    )
