"""Exception hierarchy shared by all speclab modules."""

from __future__ import annotations


class SpecLabError(Exception):
    """Base class for all speclab errors."""


class DegenerateDomainError(SpecLabError):
    """Domain has no interior cells, or a shape is too small for the grid."""


class GridMismatchError(SpecLabError):
    """Two grid domains do not share spacing, origin and extent."""


class InvalidConfigError(SpecLabError):
    """A shape or run configuration violates its invariants."""


class IterationLimitError(SpecLabError):
    """An iterative solver ran out of iterations.

    Carries the final residual so callers can decide whether the partial
    result is still usable.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (final residual {residual:.3e})")
        self.residual = residual


class DecompositionError(SpecLabError):
    """Sign sets of the second eigenfunction are degenerate."""


class InsufficientDataError(SpecLabError):
    """Too few valid samples survived filtering to fit an exponent."""
