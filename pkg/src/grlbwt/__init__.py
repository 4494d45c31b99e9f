"""Multi-string BWT construction with run-length and grammar-compressed intermediates."""

from .alphabet import DUMMY, SENTINEL, StringCollection, SymbolMap, TextLevel, ingest
from .errors import CorruptionError, FileFormatError, GrlbwtError, IngestError
from .oracle import bcr_bwt_naive, bcr_bwt_symbols, invert_bcr
from .pipeline import BwtResult, Config, PipelineStats, grl_bwt, stats
from .rle import EMPTY, RunSequence

__version__ = "0.1.0"

__all__ = [
    "BwtResult",
    "Config",
    "CorruptionError",
    "DUMMY",
    "EMPTY",
    "FileFormatError",
    "GrlbwtError",
    "IngestError",
    "PipelineStats",
    "RunSequence",
    "SENTINEL",
    "StringCollection",
    "SymbolMap",
    "TextLevel",
    "bcr_bwt_naive",
    "bcr_bwt_symbols",
    "grl_bwt",
    "ingest",
    "invert_bcr",
    "stats",
    "__version__",
]
