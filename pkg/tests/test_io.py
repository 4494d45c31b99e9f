import random

import pytest

from grlbwt.errors import FileFormatError, IngestError
from grlbwt.io_files import (
    iter_runs_file,
    read_cdict,
    read_input,
    read_ptable,
    read_rlbwt,
    read_runs,
    run_file_header,
    write_cdict,
    write_ptable,
    write_rlbwt,
    write_runs,
)
from grlbwt.oracle import bcr_bwt_naive
from grlbwt.parser import run_round
from grlbwt.alphabet import SymbolMap, ingest
from grlbwt.rle import RunSequence

from conftest import make_collection, random_collection


def test_read_input_lines(tmp_path):
    p = tmp_path / "in.txt"
    p.write_bytes(b"gtacc\ngtaatagtacc\n")
    c = read_input(p, "lines")
    assert c.strings == (b"gtacc", b"gtaatagtacc")


def test_read_input_lines_empty_line(tmp_path):
    p = tmp_path / "in.txt"
    p.write_bytes(b"ab\n\ncd\n")
    with pytest.raises(IngestError) as e:
        read_input(p, "lines")
    assert "line 2" in str(e.value)


def test_read_input_fasta(tmp_path):
    p = tmp_path / "in.fa"
    p.write_bytes(b">x\nAC\nGT\n>y\nT\n")
    c = read_input(p, "fasta")
    assert c.strings == (b"ACGT", b"T")


def test_read_input_fasta_no_uppercasing(tmp_path):
    p = tmp_path / "in.fa"
    p.write_bytes(b">x\nacGT\n")
    assert read_input(p, "fasta").strings == (b"acGT",)


def test_read_input_fasta_errors(tmp_path):
    p = tmp_path / "bad.fa"
    p.write_bytes(b"ACGT\n")
    with pytest.raises(IngestError):
        read_input(p, "fasta")
    p.write_bytes(b">x\n>y\nAC\n")
    with pytest.raises(IngestError) as e:
        read_input(p, "fasta")
    assert "line 1" in str(e.value)


def test_read_input_raw(tmp_path):
    p = tmp_path / "in.raw"
    p.write_bytes(b"ab\0aab\0")
    c = read_input(p, "raw", separator=0)
    assert c.strings == (b"ab", b"aab")


def test_read_input_empty_file(tmp_path):
    p = tmp_path / "empty"
    p.write_bytes(b"")
    with pytest.raises(IngestError):
        read_input(p, "lines")


def test_rlbwt_round_trip_simple(tmp_path):
    seq = RunSequence([(2, 4)])
    m = SymbolMap({ord("a"): 2}, 0x0A)
    path = tmp_path / "x.rlbwt"
    write_rlbwt(seq, m, 1, path)
    f = read_rlbwt(path)
    assert f.runs == seq
    assert f.symbol_map == m
    assert f.k == 1


def test_rlbwt_huge_run_length(tmp_path):
    seq = RunSequence([(3, 1 << 40), (1, 2)])
    m = SymbolMap({ord("a"): 2, ord("b"): 3}, 0)
    path = tmp_path / "big.rlbwt"
    write_rlbwt(seq, m, 2, path)
    assert read_rlbwt(path).runs == seq


def test_rlbwt_oracle_output_run_count(tmp_path):
    c = make_collection(b"ab", b"ab")
    bwt, m = bcr_bwt_naive(c)
    seq = RunSequence()
    for s in bwt:
        seq.append_run(s, 1)
    path = tmp_path / "o.rlbwt"
    write_rlbwt(seq, m, 2, path)
    f = read_rlbwt(path)
    assert f.runs.run_count() == 3
    assert f.runs.runs == [(3, 2), (1, 2), (2, 2)]


def test_rlbwt_bad_magic(tmp_path):
    p = tmp_path / "bad"
    p.write_bytes(b"NOPE" + bytes(40))
    with pytest.raises(FileFormatError):
        read_rlbwt(p)


def test_rlbwt_truncation(tmp_path):
    seq = RunSequence([(2, 4), (1, 1)])
    m = SymbolMap({ord("a"): 2}, 0x0A)
    path = tmp_path / "x.rlbwt"
    write_rlbwt(seq, m, 1, path)
    data = path.read_bytes()
    path.write_bytes(data[:-1])
    with pytest.raises(FileFormatError):
        read_rlbwt(path)


def test_runs_file_round_trip_random(tmp_path):
    rng = random.Random(61)
    for i in range(30):
        seq = RunSequence()
        for _ in range(rng.randint(0, 200)):
            seq.append_entry(rng.randint(0, 6), rng.randint(1, 1 << rng.randint(1, 34)))
        path = tmp_path / f"r{i}.runs"
        write_runs(seq, path)
        assert run_file_header(path) == (seq.total, seq.run_count())
        assert read_runs(path) == seq


def test_runs_file_streams_with_tiny_buffer(tmp_path):
    seq = RunSequence()
    rng = random.Random(62)
    for _ in range(5000):
        seq.append_entry(rng.randint(0, 300), rng.randint(1, 10**7))
    path = tmp_path / "big.runs"
    write_runs(seq, path, buffer_bytes=64)
    got = list(iter_runs_file(path, buffer_bytes=64))
    assert got == seq.runs


def test_runs_file_bad_magic(tmp_path):
    p = tmp_path / "bad.runs"
    p.write_bytes(b"XXXX" + bytes(30))
    with pytest.raises(FileFormatError):
        read_runs(p)


def test_cdict_round_trip(tmp_path):
    text, _ = ingest(make_collection(b"gtacc", b"gtaatagtacc"))
    cd = run_round(text).cdict
    path = tmp_path / "d.cdict"
    write_cdict(cd, path)
    back = read_cdict(path)
    assert back.lefts == cd.lefts
    assert back.nexts == cd.nexts
    assert back.terminal_flags == cd.terminal_flags
    assert back.proper_suffix_flags == cd.proper_suffix_flags
    assert back.suffix_of_T == cd.suffix_of_T
    assert back.sigma_next == cd.sigma_next
    assert back.sigma == cd.sigma


def test_ptable_round_trip(tmp_path):
    text, _ = ingest(make_collection(b"gtacc", b"gtaatagtacc"))
    table = run_round(text).phrase_table
    path = tmp_path / "t.ptable"
    write_ptable(table, path)
    assert read_ptable(path) == table


def test_round_trip_through_files_random(tmp_path):
    rng = random.Random(63)
    for i in range(20):
        c = random_collection(rng)
        bwt, m = bcr_bwt_naive(c)
        seq = RunSequence()
        for s in bwt:
            seq.append_run(s, 1)
        path = tmp_path / f"c{i}.rlbwt"
        write_rlbwt(seq, m, c.k, path)
        f = read_rlbwt(path)
        assert f.runs == seq and f.k == c.k
