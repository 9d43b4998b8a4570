"""Exception types shared by the whole toolkit.

Every error carries a short machine-greppable ``code``; the CLI prefixes
messages with ``error[<code>]:`` so scripts can match on the failure class
without parsing prose.
"""

from __future__ import annotations


class MorphmapError(Exception):
    """Base class for all structured toolkit errors."""

    code = "error"


class ParseError(MorphmapError):
    """Malformed input: bad header, row shape, or field value."""

    code = "parse"

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateKeyError(MorphmapError):
    """A key that must be unique appeared more than once."""

    code = "duplicate"


class ValidationError(MorphmapError):
    """A value violates a domain invariant."""

    code = "validation"


class CompletenessError(MorphmapError):
    """The comparison grid has missing cells or wrong probe counts."""

    code = "completeness"


class UnknownReferenceError(MorphmapError):
    """A record points at a morph or subject slot that does not exist."""

    code = "reference"


class EmptySelectionError(MorphmapError):
    """An operation needs at least one morph but the selection is empty."""

    code = "empty-selection"


class EmptyPoolError(MorphmapError):
    """An operation needs a non-empty score pool."""

    code = "empty-pool"


class ConfigurationError(MorphmapError):
    """Inconsistent wiring, e.g. an FRS without a calibrated threshold."""

    code = "configuration"


class ArgumentError(MorphmapError):
    """An argument is outside its valid range."""

    code = "argument"


class ReadError(MorphmapError):
    """An input file could not be read."""

    code = "read"


class WriteError(MorphmapError):
    """An output file could not be written."""

    code = "write"
