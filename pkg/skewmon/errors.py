"""Exception hierarchy for the monitor.

Every error raised on purpose by skewmon derives from SkewmonError, so the
command-line layer can turn it into a diagnostic and a non-zero exit.
"""

from typing import Optional


class SkewmonError(Exception):
    """Base class for all skewmon errors."""


class TraceError(SkewmonError):
    """Problem with an incoming trace record."""


class QuantizationError(TraceError):
    """A time value is not a multiple of the configured quantum."""


class TraceFormatError(TraceError):
    """A trace line could not be decoded, or carries an invalid value."""


class SequenceError(TraceError):
    """Events or local states arrived out of per-process order."""


class TraceValidityError(TraceError):
    """The trace violates a timing assumption of the partially synchronous model."""


class DefinitionError(SkewmonError):
    """Unknown predicate, process or atom reference."""


class FormulaParseError(SkewmonError):
    """A property could not be parsed."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnsupportedFeatureError(FormulaParseError):
    """The property uses syntax outside the supported TCTL subset."""


class NotReadyError(SkewmonError):
    """The lattice has no initial consistent global state yet."""


class HorizonError(SkewmonError):
    """The unfolding horizon is below the required minimum."""


class GraphError(SkewmonError):
    """The unfolded graph is malformed (no initial node, dead ends)."""


class OracleScopeError(SkewmonError):
    """The instance exceeds the brute-force oracle caps."""


class MemoryLimitExceeded(SkewmonError):
    """Resident memory went over the configured ceiling."""


class ConfigError(SkewmonError):
    """A configuration file or value is invalid."""
