"""Exception types shared across the package."""


class GrlbwtError(Exception):
    """Base class for all errors raised by this package."""


class IngestError(GrlbwtError, ValueError):
    """Invalid input collection (empty, or separator byte inside a string)."""


class FileFormatError(GrlbwtError, ValueError):
    """Malformed or truncated serialized file."""


class CorruptionError(GrlbwtError, RuntimeError):
    """Internal consistency check failed; indicates a bug or corrupted artifact."""
