from __future__ import annotations


class MotiveError(Exception):
    """Base class for every error raised by the library."""


class DomainError(MotiveError, ValueError):
    """Mathematically invalid input: zero in Q*, a prime outside the window, a float."""


class ContractViolation(MotiveError, ValueError):
    """Shapes, coordinate systems or morphisms that do not fit together."""


class TheoremCheckFailure(MotiveError, RuntimeError):
    def __init__(self, message: str, *, solution_dimension: int | None = None):
        super().__init__(message)
        self.solution_dimension = solution_dimension


class DocumentError(MotiveError, ValueError):
    """An input document that cannot be read or validated; ``location`` points at the culprit."""

    def __init__(self, message: str, *, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
