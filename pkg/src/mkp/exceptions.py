"""Exception types raised across the package."""


class MkpError(Exception):
    """Base class for all package errors."""


class GraphFormatError(MkpError, ValueError):
    """Malformed ``.wg`` input.  ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ModelFormatError(MkpError, ValueError):
    """Malformed LP or SDPA text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GeneratorError(MkpError, RuntimeError):
    pass


class RowCapExceeded(MkpError):
    """A model builder would generate more rows than the configured cap."""

    def __init__(self, rows, cap):
        self.rows = rows
        self.cap = cap
        super().__init__(
            f"model would have {rows} constraint rows, above the cap of {cap} "
            "(set MKP_ROW_CAP to override)"
        )


class InfeasibleAssignment(MkpError, ValueError):
    """An assignment violates a constraint row; ``row`` names it."""

    def __init__(self, message, row=None):
        self.row = row
        super().__init__(message)


class ContractViolation(MkpError, AssertionError):
    """An internal precondition that feasible input guarantees did not hold."""
