"""Exception types shared across the package."""


class TropisolveError(Exception):
    """Base class for all package errors."""


class DimensionError(TropisolveError, ValueError):
    """A vector or index does not match the declared dimension."""


class FormulaSyntaxError(TropisolveError, ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class LimitExceeded(TropisolveError):
    """An enumeration budget or size limit was exceeded."""


class PreconditionError(TropisolveError, ValueError):
    """Input does not belong to the class an algorithm requires."""


class ConsistencyError(TropisolveError, AssertionError):
    """An internal cross-check (duality, game values) failed."""
