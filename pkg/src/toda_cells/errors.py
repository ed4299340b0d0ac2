"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class TodaCellsError(Exception):
    """Base class for every error raised by toda_cells."""


class DomainError(TodaCellsError, ValueError):
    """Input outside the domain of an operation (bad type, index or polynomial)."""


class ConfigError(DomainError):
    """Configuration file or environment value could not be used."""


class BlowUpError(TodaCellsError, ArithmeticError):
    """A tau-function vanishes at the evaluation point."""

    def __init__(self, k: int, point: object = None) -> None:
        self.k = k
        self.point = point
        where = f" at {point}" if point is not None else ""
        super().__init__(f"tau_{k} vanishes{where} (Painleve divisor hit)")


class VerificationError(TodaCellsError):
    """A mathematical cross-check failed."""


class BoundaryError(VerificationError):
    """The boundary map does not square to zero."""

    def __init__(self, square: tuple[str, int, int], value: int) -> None:
        self.square = square
        self.value = value
        base, i, j = square
        super().__init__(
            f"d^2 != 0 on the square starting at {base} adding alpha_{i}, alpha_{j}:"
            f" sum of paths is {value}"
        )


class ClassificationError(TodaCellsError, RuntimeError):
    """A Dynkin subdiagram matched no standard type."""
