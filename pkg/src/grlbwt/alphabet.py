"""Input collections, dense integer alphabets, and the per-round text.

Two symbol values are reserved at every round: 0 is the DUMMY/EMPTY
marker (never maps to a byte) and 1 is the sentinel that terminates each
string. Input bytes are remapped to the contiguous range [2, sigma] so
that bucket arrays can be sized by the alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IngestError

DUMMY = 0
SENTINEL = 1


@dataclass(frozen=True)
class StringCollection:
    """An ordered, non-empty collection of non-empty byte strings."""

    strings: tuple[bytes, ...]

    def __post_init__(self):
        if not self.strings:
            raise IngestError("collection must contain at least one string")
        for idx, s in enumerate(self.strings):
            if not s:
                raise IngestError(f"string {idx} is empty")
        if not isinstance(self.strings, tuple):
            object.__setattr__(self, "strings", tuple(self.strings))

    @property
    def k(self) -> int:
        return len(self.strings)

    def total_bytes(self) -> int:
        return sum(len(s) for s in self.strings)


class SymbolMap:
    """Bijection between input bytes and dense symbols in [2, sigma]."""

    __slots__ = ("byte_to_symbol", "symbol_to_byte", "separator")

    def __init__(self, byte_to_symbol: dict[int, int], separator: int):
        self.byte_to_symbol = byte_to_symbol
        self.separator = separator
        size = 2 + len(byte_to_symbol)
        table: list[int | None] = [None] * size
        table[SENTINEL] = separator
        for b, s in byte_to_symbol.items():
            table[s] = b
        self.symbol_to_byte = table

    @property
    def sigma(self) -> int:
        return 1 + len(self.byte_to_symbol)

    def encode(self, data: bytes) -> list[int]:
        b2s = self.byte_to_symbol
        return [b2s[b] for b in data]

    def decode(self, symbols) -> bytes:
        table = self.symbol_to_byte
        return bytes(table[s] for s in symbols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymbolMap)
            and self.byte_to_symbol == other.byte_to_symbol
            and self.separator == other.separator
        )


@dataclass
class TextLevel:
    """The round-i text over [1, sigma] plus the suffix-marker bit vector.

    suffix_flags is indexed by symbol value; flag 1 means every occurrence
    of that symbol sits at the end of one of the collection's strings, so
    the right-to-left scans treat those positions as unit terminators.
    """

    level: int
    symbols: list[int]
    sigma: int
    k: int
    suffix_flags: bytearray  # size sigma + 1, slot 0 unused

    @property
    def n(self) -> int:
        return len(self.symbols)

    def boundary_flags(self) -> bytearray:
        """Per-position terminator bits derived from suffix_flags."""
        flags = self.suffix_flags
        return bytearray(map(flags.__getitem__, self.symbols))


def ingest(collection: StringCollection, separator: int = 0x0A) -> tuple[TextLevel, SymbolMap]:
    """Concatenate the collection with one sentinel per string under a dense map."""
    if isinstance(separator, (bytes, bytearray)):
        if len(separator) != 1:
            raise IngestError("separator must be a single byte")
        separator = separator[0]
    if not 0 <= separator <= 0xFF:
        raise IngestError(f"separator must be a byte value, got {separator}")

    seen = set()
    for idx, s in enumerate(collection.strings):
        off = s.find(separator)
        if off >= 0:
            raise IngestError(
                f"separator byte {separator:#04x} occurs inside string {idx} at offset {off}"
            )
        seen.update(s)

    byte_to_symbol = {b: i for i, b in enumerate(sorted(seen), start=2)}
    symbol_map = SymbolMap(byte_to_symbol, separator)

    symbols: list[int] = []
    for s in collection.strings:
        symbols.extend(byte_to_symbol[b] for b in s)
        symbols.append(SENTINEL)

    sigma = symbol_map.sigma
    flags = bytearray(sigma + 1)
    flags[SENTINEL] = 1
    text = TextLevel(level=1, symbols=symbols, sigma=sigma, k=collection.k, suffix_flags=flags)
    return text, symbol_map


def expand_symbol(level_stack, symbol: int, symbol_map: SymbolMap | None = None):
    """Expand a symbol of level len(level_stack)+1 down to level 1.

    level_stack holds one entry per completed round, oldest first; each
    entry provides rank_to_phrase (list indexed by rank, slot 0 unused)
    and suffix_flags for that round's input text. Adjacent phrases within
    an expansion overlap by one symbol except after a suffix-marked
    symbol. Returns level-1 symbols, or bytes when a map is given.
    """
    seq = [symbol]
    for round_info in reversed(level_stack):
        phrases = round_info.rank_to_phrase
        flags = round_info.suffix_flags
        out: list[int] = []
        prev_marked = True
        for s in seq:
            if s >= len(phrases) or phrases[s] is None:
                raise ValueError(f"symbol {s} out of range at level {round_info.level + 1}")
            phrase = phrases[s]
            out.extend(phrase if prev_marked else phrase[1:])
            prev_marked = bool(flags[phrase[-1]])
        seq = out
    if symbol_map is not None:
        return symbol_map.decode(seq)
    return seq
