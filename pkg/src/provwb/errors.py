"""Exception types shared across the workbench."""


class ParseError(ValueError):
    """Malformed bundle / tree / valuation input.

    ``line`` and ``col`` are 1-based positions when known.
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "")
            message = f"{message} ({where})"
        super().__init__(message)


class ValidationError(ValueError):
    """Semantically invalid input: bad cut, bound, name collision, etc."""


class EvaluationError(ArithmeticError):
    """Valuation produced a non-finite result."""
