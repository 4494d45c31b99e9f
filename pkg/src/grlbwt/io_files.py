"""Input readers and binary serialization for outputs and round artifacts.

All fixed-width integers are little-endian; variable-length unsigned
integers are base-128 with a continuation bit. Formats are documented in
docs/formats.md.
"""

from __future__ import annotations

import struct
import sys
from array import array
from dataclasses import dataclass

from .alphabet import SENTINEL, StringCollection, SymbolMap
from .errors import FileFormatError, IngestError
from .parser import CompressedDict
from .rle import RunSequence

RLBWT_MAGIC = b"GRLB"
RUNS_MAGIC = b"GRLR"
CDICT_MAGIC = b"GRLD"
PTABLE_MAGIC = b"GRLT"
VERSION = 1

DEFAULT_BUFFER = 8 * 1024 * 1024


def encode_uvarint(value: int, out: bytearray) -> None:
    while value >= 0x80:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    out.append(value)


def read_input(path, fmt: str = "lines", separator: int = 0) -> StringCollection:
    """Read a string collection from a file in lines, fasta, or raw format."""
    with open(path, "rb") as f:
        data = f.read()
    if not data:
        raise IngestError(f"{path}: file is empty")

    if fmt == "lines":
        if data.endswith(b"\n"):
            data = data[:-1]
        strings = data.split(b"\n")
        for i, s in enumerate(strings):
            if not s:
                raise IngestError(f"{path}: line {i + 1} is empty")
        return StringCollection(tuple(strings))

    if fmt == "fasta":
        strings = []
        name = None
        buf: list[bytes] = []
        lineno = 0
        record_line = 0
        for line in data.split(b"\n"):
            lineno += 1
            line = line.strip()
            if not line:
                continue
            if line.startswith(b">"):
                if name is not None:
                    if not buf:
                        raise IngestError(f"{path}: record at line {record_line} is empty")
                    strings.append(b"".join(buf))
                name = line[1:]
                record_line = lineno
                buf = []
            else:
                if name is None:
                    raise IngestError(f"{path}: line {lineno} precedes any record header")
                buf.append(line)
        if name is None:
            raise IngestError(f"{path}: no fasta records found")
        if not buf:
            raise IngestError(f"{path}: record at line {record_line} is empty")
        strings.append(b"".join(buf))
        return StringCollection(tuple(strings))

    if fmt == "raw":
        sep = bytes([separator])
        if data.endswith(sep):
            data = data[:-1]
        strings = data.split(sep)
        for i, s in enumerate(strings):
            if not s:
                raise IngestError(f"{path}: record {i + 1} is empty")
        return StringCollection(tuple(strings))

    raise ValueError(f"unknown input format {fmt!r}")


def write_rlbwt(seq: RunSequence, symbol_map: SymbolMap, k: int, path, buffer_bytes: int = DEFAULT_BUFFER) -> None:
    """Serialize a run-length BWT with its symbol map."""
    out = bytearray()
    out += RLBWT_MAGIC
    out.append(VERSION)
    out.append(0)  # flags
    out += struct.pack("<QQQ", k, symbol_map.sigma, seq.run_count())
    entries = [(SENTINEL, symbol_map.separator)]
    entries += sorted((s, b) for b, s in symbol_map.byte_to_symbol.items())
    out += struct.pack("<Q", len(entries))
    for sym, byte in entries:
        out.append(byte)
        encode_uvarint(sym, out)
    with open(path, "wb", buffering=buffer_bytes) as f:
        f.write(bytes(out))
        buf = bytearray()
        for sym, length in seq.iterate_runs():
            encode_uvarint(sym, buf)
            encode_uvarint(length, buf)
            if len(buf) >= buffer_bytes:
                f.write(bytes(buf))
                buf.clear()
        f.write(bytes(buf))


@dataclass
class RlbwtFile:
    runs: RunSequence
    symbol_map: SymbolMap
    k: int
    sigma: int


def read_rlbwt(path, buffer_bytes: int = DEFAULT_BUFFER) -> RlbwtFile:
    with open(path, "rb") as f:
        head = f.read(6)
        if len(head) < 6 or head[:4] != RLBWT_MAGIC:
            raise FileFormatError(f"{path}: bad magic")
        if head[4] != VERSION:
            raise FileFormatError(f"{path}: unsupported version {head[4]}")
        body = f.read(24)
        if len(body) < 24:
            raise FileFormatError(f"{path}: truncated header")
        k, sigma, run_count = struct.unpack("<QQQ", body)
        rest = f.read()
    pos = 0

    def take_uvarint() -> int:
        nonlocal pos
        shift = 0
        value = 0
        while True:
            if pos >= len(rest):
                raise FileFormatError(f"{path}: truncated file")
            byte = rest[pos]
            pos += 1
            value |= (byte & 0x7F) << shift
            if byte < 0x80:
                return value
            shift += 7

    if pos + 8 > len(rest):
        raise FileFormatError(f"{path}: truncated map block")
    (entry_count,) = struct.unpack_from("<Q", rest, pos)
    pos += 8
    byte_to_symbol = {}
    separator = 0x0A
    for _ in range(entry_count):
        if pos >= len(rest):
            raise FileFormatError(f"{path}: truncated map block")
        byte = rest[pos]
        pos += 1
        sym = take_uvarint()
        if sym == SENTINEL:
            separator = byte
        else:
            byte_to_symbol[byte] = sym
    symbol_map = SymbolMap(byte_to_symbol, separator)

    seq = RunSequence()
    for _ in range(run_count):
        sym = take_uvarint()
        length = take_uvarint()
        seq.append_entry(sym, length)
    if pos != len(rest):
        raise FileFormatError(f"{path}: {len(rest) - pos} trailing bytes")
    if seq.run_count() != run_count:
        raise FileFormatError(f"{path}: run count mismatch")
    return RlbwtFile(seq, symbol_map, k, sigma)


class RunWriter:
    """Streaming writer for run files; the header is patched on close."""

    def __init__(self, path, buffer_bytes: int = DEFAULT_BUFFER):
        self._f = open(path, "wb", buffering=buffer_bytes)
        self._f.write(RUNS_MAGIC + bytes([VERSION, 0]) + b"\0" * 16)
        self._buf = bytearray()
        self._limit = max(buffer_bytes, 1 << 16)
        self.total = 0
        self.run_count = 0

    def write_run(self, symbol: int, length: int) -> None:
        buf = self._buf
        encode_uvarint(symbol, buf)
        encode_uvarint(length, buf)
        self.total += length
        self.run_count += 1
        if len(buf) >= self._limit:
            self._f.write(bytes(buf))
            buf.clear()

    def write_all(self, runs) -> None:
        for symbol, length in runs:
            self.write_run(symbol, length)

    def close(self) -> None:
        self._f.write(bytes(self._buf))
        self._buf.clear()
        self._f.seek(6)
        self._f.write(struct.pack("<QQ", self.total, self.run_count))
        self._f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_runs(seq: RunSequence, path, buffer_bytes: int = DEFAULT_BUFFER) -> None:
    with RunWriter(path, buffer_bytes) as w:
        w.write_all(seq.iterate_runs())


def run_file_header(path) -> tuple[int, int]:
    """(total, run_count) of a run file."""
    with open(path, "rb") as f:
        head = f.read(22)
    if len(head) < 22 or head[:4] != RUNS_MAGIC:
        raise FileFormatError(f"{path}: bad run file magic")
    if head[4] != VERSION:
        raise FileFormatError(f"{path}: unsupported version {head[4]}")
    total, run_count = struct.unpack_from("<QQ", head, 6)
    return total, run_count


def iter_runs_file(path, buffer_bytes: int = DEFAULT_BUFFER):
    """Stream (symbol, length) pairs from a run file in fixed-size chunks."""
    total, run_count = run_file_header(path)
    with open(path, "rb", buffering=0) as f:
        f.seek(22)
        chunk = max(buffer_bytes, 1 << 16)
        buf = f.read(chunk)
        pos = 0
        produced = 0
        pending: list[tuple[int, int]] = []
        while produced < run_count:
            n = len(buf)
            # Decode complete pairs from this chunk; 20 bytes covers the
            # largest possible pair, so stop near the end and refill.
            safe = n - 20
            pending.clear()
            append = pending.append
            while pos <= safe and produced + len(pending) < run_count:
                byte = buf[pos]
                pos += 1
                if byte < 0x80:
                    sym = byte
                else:
                    sym = byte & 0x7F
                    shift = 7
                    while True:
                        byte = buf[pos]
                        pos += 1
                        if byte < 0x80:
                            sym |= byte << shift
                            break
                        sym |= (byte & 0x7F) << shift
                        shift += 7
                byte = buf[pos]
                pos += 1
                if byte < 0x80:
                    length = byte
                else:
                    length = byte & 0x7F
                    shift = 7
                    while True:
                        byte = buf[pos]
                        pos += 1
                        if byte < 0x80:
                            length |= byte << shift
                            break
                        length |= (byte & 0x7F) << shift
                        shift += 7
                append((sym, length))
            produced += len(pending)
            yield from pending
            if produced >= run_count:
                break
            more = f.read(chunk)
            if not more:
                # Tail of the file: decode the remainder with bounds checks.
                tail = buf[pos:]
                pos = 0
                buf = tail
                n = len(buf)
                while produced < run_count:
                    sym = 0
                    shift = 0
                    while True:
                        if pos >= n:
                            raise FileFormatError(f"{path}: truncated run data")
                        byte = buf[pos]
                        pos += 1
                        sym |= (byte & 0x7F) << shift
                        if byte < 0x80:
                            break
                        shift += 7
                    length = 0
                    shift = 0
                    while True:
                        if pos >= n:
                            raise FileFormatError(f"{path}: truncated run data")
                        byte = buf[pos]
                        pos += 1
                        length |= (byte & 0x7F) << shift
                        if byte < 0x80:
                            break
                        shift += 7
                    produced += 1
                    yield (sym, length)
                break
            buf = buf[pos:] + more
            pos = 0


def read_runs(path, buffer_bytes: int = DEFAULT_BUFFER) -> RunSequence:
    seq = RunSequence()
    for sym, length in iter_runs_file(path, buffer_bytes):
        seq.append_entry(sym, length)
    return seq


def _pack_u64s(values) -> bytes:
    a = array("Q", values)
    if sys.byteorder == "big":
        a.byteswap()
    return a.tobytes()


def _unpack_u64s(data: bytes) -> array:
    a = array("Q")
    a.frombytes(data)
    if sys.byteorder == "big":
        a.byteswap()
    return a


def _pack_bits(flags) -> bytes:
    out = bytearray((len(flags) + 7) // 8)
    for i, f in enumerate(flags):
        if f:
            out[i >> 3] |= 1 << (i & 7)
    return bytes(out)


def _unpack_bits(data: bytes, count: int) -> bytearray:
    out = bytearray(count)
    for i in range(count):
        if data[i >> 3] & (1 << (i & 7)):
            out[i] = 1
    return out


def write_cdict(cdict: CompressedDict, path, buffer_bytes: int = DEFAULT_BUFFER) -> None:
    sn = cdict.sigma_next
    flat = []
    for b in range(1, sn + 1):
        flat.append(cdict.lefts[b])
        flat.append((cdict.nexts[b] << 1) | cdict.terminal_flags[b])
    with open(path, "wb", buffering=buffer_bytes) as f:
        f.write(CDICT_MAGIC + bytes([VERSION, 0]))
        f.write(struct.pack("<QQ", sn, cdict.sigma))
        f.write(_pack_u64s(flat))
        f.write(_pack_bits(cdict.proper_suffix_flags[1:]))
        f.write(_pack_bits(cdict.suffix_of_T[1:]))


def read_cdict(path, buffer_bytes: int = DEFAULT_BUFFER) -> CompressedDict:
    with open(path, "rb", buffering=buffer_bytes) as f:
        head = f.read(6)
        if len(head) < 6 or head[:4] != CDICT_MAGIC:
            raise FileFormatError(f"{path}: bad dictionary magic")
        if head[4] != VERSION:
            raise FileFormatError(f"{path}: unsupported version {head[4]}")
        sn, sigma = struct.unpack("<QQ", f.read(16))
        pair_bytes = f.read(16 * sn)
        if len(pair_bytes) < 16 * sn:
            raise FileFormatError(f"{path}: truncated pairs")
        nbits = (sn + 7) // 8
        proper_raw = f.read(nbits)
        marked_raw = f.read(nbits)
        if len(proper_raw) < nbits or len(marked_raw) < nbits:
            raise FileFormatError(f"{path}: truncated flag blocks")
    flat = _unpack_u64s(pair_bytes)
    lefts = [0] * (sn + 1)
    nexts = [0] * (sn + 1)
    terminal = bytearray(sn + 1)
    for b in range(1, sn + 1):
        lefts[b] = flat[2 * (b - 1)]
        packed = flat[2 * (b - 1) + 1]
        nexts[b] = packed >> 1
        terminal[b] = packed & 1
    proper = bytearray(1) + _unpack_bits(proper_raw, sn)
    marked = bytearray(1) + _unpack_bits(marked_raw, sn)
    return CompressedDict(lefts, nexts, terminal, proper, marked, sn, sigma)


def write_ptable(table: dict, path, buffer_bytes: int = DEFAULT_BUFFER) -> None:
    """Snapshot of the phrase table after rank rewriting."""
    out = bytearray()
    out += PTABLE_MAGIC + bytes([VERSION, 0])
    out += struct.pack("<Q", len(table))
    for phrase, rank in table.items():
        encode_uvarint(rank, out)
        encode_uvarint(len(phrase), out)
        for s in phrase:
            encode_uvarint(s, out)
    with open(path, "wb", buffering=buffer_bytes) as f:
        f.write(bytes(out))


def read_ptable(path, buffer_bytes: int = DEFAULT_BUFFER) -> dict:
    with open(path, "rb", buffering=buffer_bytes) as f:
        head = f.read(6)
        if len(head) < 6 or head[:4] != PTABLE_MAGIC:
            raise FileFormatError(f"{path}: bad table magic")
        (count,) = struct.unpack("<Q", f.read(8))
        rest = f.read()
    pos = 0

    def take() -> int:
        nonlocal pos
        shift = 0
        value = 0
        while True:
            if pos >= len(rest):
                raise FileFormatError(f"{path}: truncated table")
            byte = rest[pos]
            pos += 1
            value |= (byte & 0x7F) << shift
            if byte < 0x80:
                return value
            shift += 7

    table = {}
    for _ in range(count):
        rank = take()
        length = take()
        phrase = tuple(take() for _ in range(length))
        table[phrase] = rank
    return table
