"""Exception types shared across the package."""

from __future__ import annotations


class GraphFormatError(ValueError):
    """Malformed edge-list or matching file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidMatchingError(ValueError):
    pass


class NotMaximumError(ValueError):
    pass


class NotPerfectError(ValueError):
    pass


class CyclicDigraphError(ValueError):
    pass


class InvalidCycleError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """An exhaustive routine refused to run (or stopped) because a cap was hit.

    Never accompanied by a partial answer.
    """

    def __init__(self, what: str, limit: float, actual: float):
        self.what = what
        self.limit = limit
        self.actual = actual
        super().__init__(f"{what} budget exceeded: {actual} > {limit}")
