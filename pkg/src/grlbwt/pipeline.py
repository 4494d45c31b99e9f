"""Pipeline orchestration: parsing rounds forward, induction rounds back.

Each parsing round's artifacts (partial BWT, compressed dictionary,
phrase table snapshot) are written to a per-run temp directory before the
next round starts; the induction phase reloads them round by round, so
only one round's working set is resident. BWT files are streamed through
fixed-size buffers.
"""

from __future__ import annotations

import os
import shutil
import tempfile
import uuid
from dataclasses import dataclass, field

from . import inducer, io_files, parser
from .alphabet import StringCollection, SymbolMap, ingest
from .errors import GrlbwtError
from .rle import RunSequence

TMPDIR_ENV = "GRLBWT_TMPDIR"


@dataclass
class Config:
    tmp_dir: str | None = None
    buffer_bytes: int = io_files.DEFAULT_BUFFER
    keep_temp: bool = False
    separator: int = 0x0A
    run_id: str | None = None


@dataclass
class RoundStats:
    level: int
    n: int
    sigma: int
    dict_symbols: int = 0
    phrase_count: int = 0
    pbwt_runs: int = 0
    pbwt_total: int = 0
    empty_count: int = 0
    cdict_pairs: int = 0
    bwt_runs: int = 0
    bwt_total: int = 0
    chain_walk_steps: int = 0


@dataclass
class PipelineStats:
    k: int
    n: int
    h: int = 0
    rounds: list[RoundStats] = field(default_factory=list)
    final_runs: int = 0
    bytes_written: int = 0
    workdir: str | None = None

    @property
    def runs_ratio(self) -> float:
        """n over r, the repetitiveness measure of the output."""
        return self.n / self.final_runs if self.final_runs else 0.0


@dataclass
class BwtResult:
    runs: RunSequence
    symbol_map: SymbolMap
    stats: PipelineStats


def _round_path(workdir: str, level: int, kind: str) -> str:
    return os.path.join(workdir, f"round{level}.{kind}")


def _write_artifact(write, path: str, level: int, kind: str) -> int:
    try:
        write(path)
    except OSError as e:
        detail = "disk full" if e.errno == 28 else e.strerror or str(e)
        raise GrlbwtError(f"round {level}: failed writing {kind} artifact: {detail}") from e
    return os.path.getsize(path)


def grl_bwt(collection: StringCollection, config: Config | None = None) -> BwtResult:
    """Build the multi-string BWT of a collection; see module docs for staging."""
    cfg = config or Config()
    text, symbol_map = ingest(collection, cfg.separator)
    stats = PipelineStats(k=collection.k, n=text.n)

    base = cfg.tmp_dir or os.environ.get(TMPDIR_ENV) or tempfile.gettempdir()
    run_id = cfg.run_id or f"grlbwt-{uuid.uuid4().hex[:12]}"
    workdir = os.path.join(base, run_id)
    os.makedirs(workdir, exist_ok=True)
    stats.workdir = workdir if cfg.keep_temp else None
    buf = cfg.buffer_bytes

    try:
        level = text
        while True:
            res = parser.run_round(level)
            i = res.level
            stats.rounds.append(
                RoundStats(
                    level=i,
                    n=res.n,
                    sigma=res.sigma,
                    dict_symbols=res.dict_symbols,
                    phrase_count=res.phrase_count,
                    pbwt_runs=res.pbwt.run_count(),
                    pbwt_total=res.pbwt.total,
                    empty_count=res.sigma_next,
                    cdict_pairs=2 * res.sigma_next,
                )
            )
            stats.bytes_written += _write_artifact(
                lambda p: io_files.write_runs(res.pbwt, p, buf), _round_path(workdir, i, "pbwt"), i, "pbwt"
            )
            stats.bytes_written += _write_artifact(
                lambda p: io_files.write_cdict(res.cdict, p, buf), _round_path(workdir, i, "cdict"), i, "cdict"
            )
            stats.bytes_written += _write_artifact(
                lambda p: io_files.write_ptable(res.phrase_table, p, buf), _round_path(workdir, i, "ptable"), i, "ptable"
            )
            next_text = res.next_text
            final = res.final
            del res
            if final:
                final_level = next_text
                break
            level = next_text

        h = final_level.level
        stats.h = h
        stats.rounds.append(RoundStats(level=h, n=final_level.n, sigma=final_level.sigma))

        bwt = inducer.base_bwt(final_level)
        stats.rounds[-1].bwt_runs = bwt.run_count()
        stats.rounds[-1].bwt_total = bwt.total
        stats.bytes_written += _write_artifact(
            lambda p: io_files.write_runs(bwt, p, buf), _round_path(workdir, h, "bwt"), h, "bwt"
        )

        for i in range(h - 1, 0, -1):
            cdict = io_files.read_cdict(_round_path(workdir, i, "cdict"), buf)
            pbwt = io_files.read_runs(_round_path(workdir, i, "pbwt"), buf)
            next_path = _round_path(workdir, i + 1, "bwt")
            bwt, sizing = inducer.induction_round(
                pbwt, cdict, lambda: io_files.iter_runs_file(next_path, buf)
            )
            row = stats.rounds[i - 1]
            row.bwt_runs = bwt.run_count()
            row.bwt_total = bwt.total
            row.chain_walk_steps = sizing.walk_steps
            stats.bytes_written += _write_artifact(
                lambda p: io_files.write_runs(bwt, p, buf), _round_path(workdir, i, "bwt"), i, "bwt"
            )
        stats.final_runs = bwt.run_count()
        return BwtResult(runs=bwt, symbol_map=symbol_map, stats=stats)
    finally:
        if not cfg.keep_temp:
            shutil.rmtree(workdir, ignore_errors=True)


def stats(collection: StringCollection, config: Config | None = None) -> PipelineStats:
    """Run the pipeline for its per-round metrics only."""
    return grl_bwt(collection, config).stats
