"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised for malformed or out-of-range input (degenerate segments, bad weights, ...)."""


class ParseError(InvalidInputError):
    """An input file row could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    """A computation would exceed its configured work budget."""


class InternalInvariantError(RuntimeError):
    """An internal consistency check failed (e.g. an empty cluster in a partition)."""
