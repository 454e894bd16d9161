"""Exception hierarchy shared across the engine."""

from __future__ import annotations


class NrcError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(NrcError):
    """Syntax error with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class TypecheckError(NrcError):
    """Query is not well-typed (unbound variable, kind mismatch, ...)."""


class IncompatibleTypesError(NrcError):
    """Annotated types with different erasures cannot be merged."""


class DataError(NrcError):
    """Malformed data, environment, or context file."""


class PathError(NrcError):
    """A value or type path does not resolve to a node."""


class PreconditionError(NrcError):
    """A check was invoked on inputs violating its precondition."""


class BudgetExceededError(NrcError):
    """Exhaustive enumeration surpassed the configured cap."""
