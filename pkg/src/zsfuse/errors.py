"""Exception hierarchy shared across the engine.

Every data/validation failure raised by zsfuse derives from ZsfuseError so the
CLI can map it to a single exit code.
"""


class ZsfuseError(ValueError):
    """Base class for all zsfuse data and validation errors."""


class ManifestError(ZsfuseError):
    """Malformed manifest, label set, or partition file."""


class SplitError(ZsfuseError):
    """Split preconditions violated (speaker counts, sessions, coverage)."""


class PromptError(ZsfuseError):
    """Invalid prompt template arguments."""


class EmbeddingFormatError(ZsfuseError):
    """Base for embedding-file format violations."""


class BadMagicError(EmbeddingFormatError):
    """File does not start with the expected magic bytes."""


class UnsupportedVersionError(EmbeddingFormatError):
    """Declared format version is not supported."""


class TruncatedFileError(EmbeddingFormatError):
    """File ends before the declared payload is complete."""


class NonFiniteValueError(EmbeddingFormatError):
    """A vector contains NaN or infinity."""


class DimensionError(ZsfuseError):
    """Vector dimensions disagree with what the operation requires."""


class MetricError(ZsfuseError):
    """Metric preconditions violated (e.g. zero-support class in strict mode)."""


class TrainError(ZsfuseError):
    """Training preconditions violated (coverage gaps, empty partitions)."""


class GridError(ZsfuseError):
    """Grid run preconditions violated (missing tables or prompt embeddings)."""
