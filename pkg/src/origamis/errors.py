"""Exception types shared across the package.

Domain failures raise subclasses of :class:`OrigamiError`; the service layer
maps them to structured HTTP errors and the CLI to exit code 1.
"""

from __future__ import annotations


class OrigamiError(Exception):
    """Base class for domain errors."""

    kind = "error"


class DegreeMismatch(OrigamiError):
    kind = "degree-mismatch"


class Disconnected(OrigamiError):
    kind = "disconnected"


class InvalidInvolution(OrigamiError):
    kind = "invalid-involution"


class NormalizationFailure(OrigamiError):
    """Internal convention bug in the generator action; must never trigger on
    valid input."""

    kind = "normalization-failure"


class NotUnimodular(OrigamiError):
    kind = "not-unimodular"


class NotClosed(OrigamiError):
    kind = "not-closed"


class Incompatible(OrigamiError):
    kind = "incompatible"


class SingularMatrix(OrigamiError):
    kind = "singular-matrix"


class InvalidTuple(OrigamiError):
    kind = "invalid-tuple"


class ValidationError(OrigamiError):
    kind = "validation"


class ParseError(OrigamiError):
    """Syntax error in a text input; carries the 0-based offending position."""

    kind = "parse"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
