"""Shared fixtures: random input generators and brute-force oracles.

The brute-force helpers here sort and group suffixes directly with the
comparison rule; they never touch the induced-sorting code paths they
are used to check.
"""

from __future__ import annotations

import random
from functools import cmp_to_key

import pytest

from grlbwt.alphabet import StringCollection, ingest
from grlbwt.iss import lms_compare
from grlbwt.parser import Dictionary, build_dictionary


def make_collection(*strings) -> StringCollection:
    return StringCollection(tuple(s if isinstance(s, bytes) else s.encode() for s in strings))


GTACC = make_collection(b"gtacc", b"gtaatagtacc")


@pytest.fixture
def gtacc_text():
    text, symbol_map = ingest(GTACC)
    return text, symbol_map


def random_collection(rng: random.Random, max_k: int = 12, max_len: int = 32) -> StringCollection:
    """Random collection mixing plain, periodic, constant, duplicate,
    prefix and suffix strings."""
    sigma = rng.randint(1, 6)
    alpha = b"abcdef"[:sigma]
    k = rng.randint(1, max_k)
    strings: list[bytes] = []
    for _ in range(k):
        kind = rng.randrange(8)
        if kind == 0 or not strings:
            s = bytes(rng.choice(alpha) for _ in range(rng.randint(1, max_len)))
        elif kind == 1:
            s = bytes([rng.choice(alpha)])
        elif kind == 2:
            s = bytes([rng.choice(alpha)]) * rng.randint(1, max_len)
        elif kind == 3:
            p = bytes(rng.choice(alpha) for _ in range(rng.randint(1, 4)))
            s = (p * max_len)[: rng.randint(1, max_len)]
        elif kind == 4:
            s = strings[rng.randrange(len(strings))]
        elif kind == 5:
            base = strings[rng.randrange(len(strings))]
            s = base[: rng.randint(1, len(base))]
        elif kind == 6:
            base = strings[rng.randrange(len(strings))]
            s = base[rng.randrange(len(base)) :]
        else:
            s = bytes(rng.choice(alpha) for _ in range(rng.randint(1, 8)))
        strings.append(s)
    return StringCollection(tuple(strings))


def random_dictionary(rng: random.Random, max_phrases: int = 12, max_len: int = 8, sigma: int = 5) -> Dictionary:
    """Random dictionary of distinct phrases over [1, sigma]."""
    phrases = set()
    target = rng.randint(1, max_phrases)
    while len(phrases) < target:
        m = rng.randint(1, max_len)
        phrases.add(tuple(rng.randint(1, sigma) for _ in range(m)))
    table = {p: rng.randint(1, 5) for p in phrases}
    suffix_flags = bytearray(sigma + 1)
    suffix_flags[1] = 1
    return build_dictionary(table, suffix_flags, sigma)


def brute_suffix_sort(dic: Dictionary) -> list[tuple[int, int]]:
    """All (position, phrase) suffix entries ordered by the comparison rule."""
    items = []
    for idx, (s, e) in enumerate(dic.bounds):
        for pos in range(s, e):
            items.append((pos, idx, tuple(dic.store[pos:e])))

    def cmp(x, y):
        return lms_compare(x[2], y[2], (x[1], y[1]))

    items.sort(key=cmp_to_key(cmp))
    return [(pos, idx) for pos, idx, _ in items]


def brute_ranges(dic: Dictionary) -> list[list[int]]:
    """Equal-suffix ranges (lists of positions) in sorted order."""
    entries = brute_suffix_sort(dic)
    ranges: list[list[int]] = []
    prev = None
    for pos, idx in entries:
        s = tuple(dic.store[pos : dic.bounds[idx][1]])
        if s != prev:
            ranges.append([])
            prev = s
        ranges[-1].append(pos)
    return ranges


def brute_pbwt(dic: Dictionary, suffix_flags: bytearray) -> list[tuple[int, int]]:
    """Partial BWT as (symbol, length) entries, EMPTY as 0, from first principles."""
    out: list[tuple[int, int]] = []
    for rng_positions in brute_ranges(dic):
        pos0 = rng_positions[0]
        idx0 = dic.phrase_of[pos0]
        length = dic.bounds[idx0][1] - pos0
        if length == 1 and not suffix_flags[dic.store[pos0]]:
            continue
        total = sum(dic.freqs[dic.phrase_of[p]] for p in rng_positions)
        lefts = {dic.store[p - 1] for p in rng_positions if not dic.start_flags[p]}
        has_start = any(dic.start_flags[p] for p in rng_positions)
        if not has_start and len(lefts) == 1:
            out.append((lefts.pop(), total))
        else:
            out.append((0, total))
    return out
