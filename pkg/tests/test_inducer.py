import random

import pytest

from grlbwt.alphabet import DUMMY, TextLevel, ingest
from grlbwt.errors import CorruptionError
from grlbwt.inducer import (
    InductionBuckets,
    _walk_chain,
    base_bwt,
    induce,
    induction_round,
    merge,
    size_buckets,
)
from grlbwt.oracle import bcr_bwt_symbols
from grlbwt.parser import CompressedDict, run_round
from conftest import GTACC, make_collection, random_collection

A, C, G, T, S = 2, 3, 4, 5, 1


def level(symbols, sigma, k, marked=()):
    flags = bytearray(sigma + 1)
    for s in marked:
        flags[s] = 1
    return TextLevel(level=9, symbols=symbols, sigma=sigma, k=k, suffix_flags=flags)


def test_base_bwt_two_equal():
    assert base_bwt(level([1, 1], 1, 2, marked=(1,))).runs == [(1, 2)]


def test_base_bwt_three_runs():
    assert base_bwt(level([2, 1, 2], 2, 3, marked=(1, 2))).runs == [(2, 1), (1, 1), (2, 1)]


def test_base_bwt_rejects_longer_text():
    with pytest.raises(ValueError):
        base_bwt(level([1, 2, 1], 2, 2, marked=(1, 2)))


def gtacc_rounds():
    text, _ = ingest(GTACC)
    rounds = []
    lvl = text
    while True:
        r = run_round(lvl)
        rounds.append(r)
        if r.final:
            return rounds, r.next_text
        lvl = r.next_text


def run_full_induction(rounds, final_level):
    bwt = base_bwt(final_level)
    for r in reversed(rounds):
        bwt, _ = induction_round(r.pbwt, r.cdict, lambda: iter(bwt.runs))
    return bwt


def test_gtacc_chain_walks():
    rounds, _ = gtacc_rounds()
    cd = rounds[0].cdict
    # gta (rank 4): one hop into the bucket of "ta", terminal t
    assert _walk_chain(cd, 4) == (((5, G),), T)
    # acc$ (rank 2): immediately terminal with the sentinel
    assert _walk_chain(cd, 2) == ((), S)
    # aata (rank 1): hop into "ta" with left a, then terminal t
    assert _walk_chain(cd, 1) == (((5, A),), T)


def test_gtacc_round1_bucket_sizes():
    rounds, final_level = gtacc_rounds()
    bwt2 = run_full_induction(rounds[1:], final_level)
    sizing = size_buckets(iter(bwt2.runs), rounds[0].cdict, rounds[0].pbwt)
    assert sizing.capacities[1:] == [1, 2, 1, 3, 4]
    assert list(sizing.occurs_in_bwt_next[1:]) == [1, 1, 1, 1, 0]


def test_gtacc_round1_induction_golden():
    rounds, final_level = gtacc_rounds()
    bwt2 = run_full_induction(rounds[1:], final_level)
    assert bwt2.symbols() == [4, 4, 3, 1, 2, 2]
    cd = rounds[0].cdict
    sizing = size_buckets(iter(bwt2.runs), cd, rounds[0].pbwt)
    buckets, transformed = induce(iter(bwt2.runs), cd, sizing)
    assert buckets.buckets[4] == [(DUMMY, 2), (A, 1)]
    assert buckets.buckets[5] == [(G, 3), (A, 1)]
    assert transformed.runs == [(T, 4), (S, 2)]
    out = merge(rounds[0].pbwt, transformed, buckets, cd, sizing.occurs_in_bwt_next)
    assert out.symbols() == bcr_bwt_symbols(GTACC)


def test_full_induction_matches_oracle():
    rounds, final_level = gtacc_rounds()
    bwt = run_full_induction(rounds, final_level)
    assert bwt.symbols() == bcr_bwt_symbols(GTACC)


def test_plain_copy_case():
    # one string, one phrase: the single EMPTY entry copies from transformed
    text, _ = ingest(make_collection(b"a"))
    r = run_round(text)
    bwt = base_bwt(r.next_text)
    out, _ = induction_round(r.pbwt, r.cdict, lambda: iter(bwt.runs))
    assert out.symbols() == [A, S]


def test_expanded_only_bucket_copied_whole():
    # strings ending differently force an expansion-only rank whose bucket
    # is emitted verbatim, without DUMMY entries
    c = make_collection(b"xac", b"ybc")
    text, _ = ingest(c)
    rounds = []
    lvl = text
    while True:
        r = run_round(lvl)
        rounds.append(r)
        if r.final:
            final_level = r.next_text
            break
        lvl = r.next_text
    bwt = run_full_induction(rounds, final_level)
    assert bwt.symbols() == bcr_bwt_symbols(c)


def test_nonterminating_chain_detected():
    cd = CompressedDict(
        lefts=[0, 2, 3],
        nexts=[0, 2, 1],
        terminal_flags=bytearray(3),
        proper_suffix_flags=bytearray([0, 1, 1]),
        suffix_of_T=bytearray(3),
        sigma_next=2,
        sigma=3,
    )
    with pytest.raises(CorruptionError):
        _walk_chain(cd, 1)


def test_bucket_overflow_detected():
    buckets = InductionBuckets(1, [0, 2])
    buckets.append(1, 3, 2)
    with pytest.raises(CorruptionError):
        buckets.append(1, 3, 1)


def test_merge_rejects_leftover_transformed():
    rounds, final_level = gtacc_rounds()
    bwt2 = run_full_induction(rounds[1:], final_level)
    cd = rounds[0].cdict
    sizing = size_buckets(iter(bwt2.runs), cd, rounds[0].pbwt)
    buckets, transformed = induce(iter(bwt2.runs), cd, sizing)
    transformed.append_run(T, 3)  # corrupt: extra symbols
    with pytest.raises(CorruptionError):
        merge(rounds[0].pbwt, transformed, buckets, cd, sizing.occurs_in_bwt_next)


def test_random_collections_full_stack():
    rng = random.Random(46)
    for _ in range(150):
        c = random_collection(rng)
        text, _ = ingest(c)
        rounds = []
        lvl = text
        while True:
            r = run_round(lvl)
            rounds.append(r)
            if r.final:
                final_level = r.next_text
                break
            lvl = r.next_text
        bwt = base_bwt(final_level)
        total_walks = 0
        total_dict = 0
        for r in reversed(rounds):
            bwt, sizing = induction_round(r.pbwt, r.cdict, lambda: iter(bwt.runs))
            assert bwt.total == r.n
            total_walks += sizing.walk_steps
            total_dict += r.dict_symbols
        assert bwt.symbols() == bcr_bwt_symbols(c)
        # chain cache walks each distinct symbol once, so total link visits
        # stay within the dictionary sizes
        assert total_walks <= total_dict + sum(r.sigma_next for r in rounds)
