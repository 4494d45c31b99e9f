"""Symbol-type classification and the generalized suffix array of a dictionary.

The suffix array covers every suffix of every dictionary phrase. It is
built by induced sorting seeded with the phrase-final symbols: those are
the only terminator positions, their relative order is known up front
(equal one-symbol strings, kept in phrase order), so no recursion is
needed. A suffix that is a proper prefix of another ranks HIGHER, which
is exactly what tail-seeded induction produces.

Equal-suffix range boundaries are detected during the induction passes
themselves by tracking the source range of each placement, and are
stored in the least significant bit of the packed entries.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from .errors import CorruptionError

if TYPE_CHECKING:
    from .parser import Dictionary

L_TYPE = 0
S_TYPE = 1
LMS_TYPE = 2


def classify(symbols, boundary_flags) -> bytearray:
    """Tag each position L/S/LMS, right to left.

    boundary_flags marks unit terminators per position; a terminator is
    S-type like a sequence end, and an S right after an L is LMS.
    """
    n = len(symbols)
    if n == 0:
        raise ValueError("cannot classify an empty sequence")
    types = bytearray(n)
    types[n - 1] = S_TYPE
    if not boundary_flags[n - 1]:
        raise ValueError("the last position must be a unit terminator")
    for j in range(n - 2, -1, -1):
        if boundary_flags[j]:
            t = S_TYPE
        else:
            a = symbols[j]
            b = symbols[j + 1]
            if a > b:
                t = L_TYPE
            elif a < b:
                t = S_TYPE
            else:
                t = L_TYPE if types[j + 1] == L_TYPE else S_TYPE
        types[j] = t
        if t == L_TYPE and types[j + 1] == S_TYPE:
            types[j + 1] = LMS_TYPE
    return types


def lms_compare(x, y, tie=(0, 0)) -> int:
    """Compare two suffix strings; a proper prefix ranks higher, exact ties fall back to phrase order."""
    for a, b in zip(x, y):
        if a != b:
            return -1 if a < b else 1
    if len(x) != len(y):
        return 1 if len(x) < len(y) else -1
    if tie[0] != tie[1]:
        return -1 if tie[0] < tie[1] else 1
    return 0


class GeneralizedSA:
    """Packed suffix array entries: (position_in_store << 1) | range_start_flag."""

    __slots__ = ("entries",)

    def __init__(self, entries: list[int]):
        self.entries = entries

    def __len__(self) -> int:
        return len(self.entries)

    def positions(self) -> list[int]:
        return [e >> 1 for e in self.entries]

    def position(self, idx: int) -> int:
        return self.entries[idx] >> 1

    def is_range_start(self, idx: int) -> bool:
        return bool(self.entries[idx] & 1)

    def ranges(self):
        """Yield (lo, hi) half-open index ranges of equal-suffix entries."""
        entries = self.entries
        n = len(entries)
        lo = 0
        for idx in range(1, n):
            if entries[idx] & 1:
                yield lo, idx
                lo = idx
        if n:
            yield lo, n


def build_generalized_sa(dic: "Dictionary") -> GeneralizedSA:
    """Induced sort of all phrase suffixes, stable across phrases for equal strings."""
    store = dic.store
    n = len(store)
    starts = dic.start_flags
    final_flags = dic.final_flags()
    types = classify(store, final_flags)
    sigma = dic.sigma

    # Seeding only the phrase finals is sound when they are the only LMS
    # positions, which every parse-produced dictionary satisfies. Anything
    # else goes through the general reduction.
    for j in range(n):
        if types[j] == LMS_TYPE and not final_flags[j]:
            return _general_sa(dic)

    counts = [0] * (sigma + 1)
    for c in store:
        counts[c] += 1
    bucket_start = [0] * (sigma + 2)
    acc = 0
    for c in range(1, sigma + 1):
        bucket_start[c] = acc
        acc += counts[c]
    bucket_start[sigma + 1] = acc

    sa = [-1] * n
    flag = bytearray(n)
    rid = [0] * n  # range token per filled slot; equal tokens mean equal suffixes

    # Seed the final symbol of each phrase at its bucket tail. Processing
    # phrases right to left keeps equal seeds in phrase order.
    tails = [bucket_start[c + 1] for c in range(sigma + 1)] + [acc]
    for p in range(dic.phrase_count - 1, -1, -1):
        f = dic.bounds[p][1] - 1
        c = store[f]
        tails[c] -= 1
        sa[tails[c]] = f
    for c in range(1, sigma + 1):
        lo = tails[c]
        hi = bucket_start[c + 1]
        if lo < hi:
            flag[lo] = 1
            for u in range(lo, hi):
                rid[u] = lo

    # L-pass: left to right, place j-1 at the head of its bucket when it is
    # L-type. Entries at phrase starts induce nothing.
    heads = [bucket_start[c] for c in range(sigma + 2)]
    last_src = [-1] * (sigma + 1)
    for u in range(n):
        j = sa[u]
        if j < 0 or starts[j]:
            continue
        jm = j - 1
        if types[jm] == L_TYPE:
            c = store[jm]
            s = heads[c]
            heads[c] = s + 1
            sa[s] = jm
            src = rid[u]
            if last_src[c] != src:
                flag[s] = 1
                rid[s] = s
            else:
                rid[s] = rid[s - 1]
            last_src[c] = src

    # S-pass: right to left, continue below the seeds so they keep the bucket
    # tail. A placement extends the previous range when its source does, and
    # the range-start flag moves down with it.
    last_src = [-1] * (sigma + 1)
    for u in range(n - 1, -1, -1):
        j = sa[u]
        if j < 0:
            raise CorruptionError("suffix array slot left empty before S-pass visit")
        if starts[j]:
            continue
        jm = j - 1
        if types[jm] != L_TYPE:
            c = store[jm]
            tails[c] -= 1
            s = tails[c]
            sa[s] = jm
            src = rid[u]
            if last_src[c] == src:
                flag[s + 1] = 0
                flag[s] = 1
                rid[s] = rid[s + 1]
            else:
                flag[s] = 1
                rid[s] = s
            last_src[c] = src

    return GeneralizedSA([(sa[u] << 1) | flag[u] for u in range(n)])


def _general_sa(dic: "Dictionary") -> GeneralizedSA:
    """Suffix array for arbitrary phrase content.

    Appending to each phrase a virtual terminator larger than every real
    symbol and increasing with phrase order turns the wanted order into a
    plain lexicographic one: a proper prefix ranks higher because its
    terminator beats any real continuation, and equal suffixes fall back
    to terminator order, i.e. phrase order.
    """
    store = dic.store
    sigma = dic.sigma
    aug: list[int] = []
    orig: list[int] = []
    for p, (s, e) in enumerate(dic.bounds):
        aug.extend(store[s:e])
        orig.extend(range(s, e))
        aug.append(sigma + 1 + p)
        orig.append(-1)
    aug.append(0)
    orig.append(-1)

    sa = _sais(aug, sigma + dic.phrase_count + 2)
    positions = [orig[j] for j in sa if orig[j] >= 0]

    bounds = dic.bounds
    phrase_of = dic.phrase_of
    flags = bytearray(len(positions))
    flags[0] = 1
    prev = positions[0]
    prev_len = bounds[phrase_of[prev]][1] - prev
    for idx in range(1, len(positions)):
        pos = positions[idx]
        length = bounds[phrase_of[pos]][1] - pos
        if length != prev_len or store[pos : pos + length] != store[prev : prev + prev_len]:
            flags[idx] = 1
        prev, prev_len = pos, length
    return GeneralizedSA([(positions[u] << 1) | flags[u] for u in range(len(positions))])


def _sais(data: list[int], sigma_size: int) -> list[int]:
    """Classic suffix array by induced sorting.

    data must end with a unique smallest sentinel 0. Returns the positions
    of all suffixes in lexicographic order, sentinel suffix first.
    """
    n = len(data)
    if n == 1:
        return [0]
    if n == 2:
        return [1, 0]

    types = bytearray(n)  # 1 = S-type
    types[n - 1] = 1
    for i in range(n - 2, -1, -1):
        a = data[i]
        b = data[i + 1]
        types[i] = 1 if a < b or (a == b and types[i + 1]) else 0

    counts = [0] * sigma_size
    for c in data:
        counts[c] += 1
    starts = [0] * (sigma_size + 1)
    acc = 0
    for c in range(sigma_size):
        starts[c] = acc
        acc += counts[c]
    starts[sigma_size] = acc

    lms = [i for i in range(1, n) if types[i] and not types[i - 1]]

    def induce(seed_positions):
        sa = [-1] * n
        tails = [starts[c + 1] for c in range(sigma_size)]
        for i in reversed(seed_positions):
            c = data[i]
            tails[c] -= 1
            sa[tails[c]] = i
        heads = starts[:sigma_size]
        for u in range(n):
            j = sa[u]
            if j > 0 and not types[j - 1]:
                c = data[j - 1]
                sa[heads[c]] = j - 1
                heads[c] += 1
        tails = [starts[c + 1] for c in range(sigma_size)]
        for u in range(n - 1, -1, -1):
            j = sa[u]
            if j > 0 and types[j - 1]:
                c = data[j - 1]
                tails[c] -= 1
                sa[tails[c]] = j - 1
        return sa

    sa = induce(lms)

    # Name the LMS substrings in sorted order.
    lms_set = bytearray(n)
    for i in lms:
        lms_set[i] = 1
    names = [-1] * n
    name = 0
    prev = -1
    for u in range(n):
        j = sa[u]
        if not (j > 0 and lms_set[j]):
            continue
        if prev >= 0:
            i1, i2 = prev, j
            while True:
                if data[i1] != data[i2]:
                    name += 1
                    break
                i1 += 1
                i2 += 1
                e1 = i1 == n or lms_set[i1]
                e2 = i2 == n or lms_set[i2]
                if e1 or e2:
                    if not (e1 and e2):
                        name += 1
                    break
        names[j] = name
        prev = j

    if name + 1 < len(lms):
        reduced = [names[i] for i in lms]
        rec = _sais(reduced, name + 1)
        order = [lms[r] for r in rec]
    else:
        order = [0] * len(lms)
        for i in lms:
            order[names[i]] = i
    return induce(order)
