"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class S1ChainsError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(S1ChainsError, ValueError):
    """Malformed input: wrong shapes, degrees, names, or violated invariants."""


class NotAComplexError(ValidationError):
    """A differential does not square to zero."""


class RelationError(ValidationError):
    """The multicomplex relations fail for some index ``k``."""

    def __init__(self, message: str, k: int | None = None):
        super().__init__(message)
        self.k = k


class ChainMapError(ValidationError):
    """A graded map does not commute with the differentials."""


class UnsupportedRingError(ValidationError):
    """The operation is not available over the requested coefficient ring."""
