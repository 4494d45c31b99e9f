"""Command-line tool: build, invert, stats."""

from __future__ import annotations

import argparse
import os
import sys

from . import io_files, report
from .errors import GrlbwtError
from .oracle import invert_to_collection
from .pipeline import Config, grl_bwt


def _parse_sep(value: str) -> int:
    """Byte value (decimal or 0x-hex) or, failing that, a single character."""
    try:
        sep = int(value, 0)
    except ValueError:
        if len(value) == 1:
            return ord(value)
        raise argparse.ArgumentTypeError(
            f"separator must be a byte value or a single character, got {value!r}"
        )
    if not 0 <= sep <= 255:
        raise argparse.ArgumentTypeError(f"separator byte out of range: {sep}")
    return sep


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grlbwt", description="Multi-string BWT construction with compressed intermediates")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build the BWT of a string collection")
    b.add_argument("input", help="input file")
    b.add_argument("-o", "--output", required=True, help="output .rlbwt file")
    b.add_argument("--format", choices=["lines", "fasta", "raw"], default="lines")
    b.add_argument("--sep", type=_parse_sep, default=0, help="record separator byte for raw format")
    b.add_argument("--tmp", default=None, help="temp directory (default $GRLBWT_TMPDIR or system tmp)")
    b.add_argument("--buffer-mb", type=int, default=8, help="stream buffer size per open artifact")
    b.add_argument("--keep-temp", action="store_true", help="keep round artifacts for inspection")
    b.add_argument("--stats", action="store_true", help="print the per-round stats table")

    v = sub.add_parser("invert", help="rebuild the original collection from a .rlbwt file")
    v.add_argument("input", help=".rlbwt file")
    v.add_argument("-o", "--output", required=True, help="output file, one string per line")

    s = sub.add_parser("stats", help="report per-round pipeline metrics")
    s.add_argument("input", help="input file")
    s.add_argument("--format", choices=["lines", "fasta", "raw"], default="lines")
    s.add_argument("--sep", type=_parse_sep, default=0)
    s.add_argument("--tmp", default=None)
    s.add_argument("--buffer-mb", type=int, default=8)
    s.add_argument("-o", "--output", default=None, help="write the table here and render figures alongside it")
    s.add_argument("--plots", default=None, help="directory for figure files")
    return p


def _ingest_separator(fmt: str, sep: int) -> int:
    # lines and fasta records cannot contain a newline, so it doubles as
    # the reserved sentinel byte; raw input reuses its record separator.
    return sep if fmt == "raw" else 0x0A


def _cmd_build(args) -> int:
    collection = io_files.read_input(args.input, args.format, args.sep)
    cfg = Config(
        tmp_dir=args.tmp,
        buffer_bytes=args.buffer_mb * 1024 * 1024,
        keep_temp=args.keep_temp,
        separator=_ingest_separator(args.format, args.sep),
    )
    result = grl_bwt(collection, cfg)
    io_files.write_rlbwt(result.runs, result.symbol_map, collection.k, args.output, cfg.buffer_bytes)
    if args.stats:
        sys.stdout.write(report.format_stats_tsv(result.stats))
    if args.keep_temp and result.stats.workdir:
        print(f"round artifacts kept in {result.stats.workdir}", file=sys.stderr)
    return 0


def _cmd_invert(args) -> int:
    f = io_files.read_rlbwt(args.input)
    collection = invert_to_collection(f.runs.symbols(), f.k, f.symbol_map)
    with open(args.output, "wb") as out:
        for s in collection.strings:
            out.write(s)
            out.write(b"\n")
    return 0


def _cmd_stats(args) -> int:
    collection = io_files.read_input(args.input, args.format, args.sep)
    cfg = Config(
        tmp_dir=args.tmp,
        buffer_bytes=args.buffer_mb * 1024 * 1024,
        separator=_ingest_separator(args.format, args.sep),
    )
    result = grl_bwt(collection, cfg)
    table = report.format_stats_tsv(result.stats)
    if args.output:
        with open(args.output, "w") as f:
            f.write(table)
        stem = os.path.splitext(os.path.basename(args.output))[0]
        fig_dir = args.plots or (os.path.dirname(os.path.abspath(args.output)))
        for path in report.render_figures(result.stats, fig_dir, stem):
            print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(table)
        if args.plots:
            for path in report.render_figures(result.stats, args.plots):
                print(f"wrote {path}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "invert":
            return _cmd_invert(args)
        if args.command == "stats":
            return _cmd_stats(args)
    except (GrlbwtError, OSError) as e:
        print(f"grlbwt {args.command}: {e}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
