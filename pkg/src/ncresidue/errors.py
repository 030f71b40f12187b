"""Exception hierarchy shared across the package."""

from __future__ import annotations


class CalculusError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CalculusError):
    """Structurally invalid input: mismatched dimensions, degrees, thetas."""


class DomainError(ValidationError):
    """An argument lies outside the mathematical domain of an operation."""


class CriticalDegreeError(DomainError):
    """The Euler antiderivative construction was requested at degree -n."""


class InsufficientExpansionError(CalculusError):
    """The stored expansion does not reach deep enough to determine the result.

    Raised instead of silently returning a value that the missing lower
    homogeneous components could change.
    """


class ParseError(CalculusError):
    """Lexical or syntactic error in a symbol document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
