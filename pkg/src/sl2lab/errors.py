"""Shared exception types."""


class Sl2LabError(Exception):
    """Base class for all workbench errors."""


class ParseError(Sl2LabError, ValueError):
    """Malformed ring spec, polynomial, element, or matrix text."""


class CapExceeded(Sl2LabError, RuntimeError):
    """A configured size cap (ring order, group order, search budget) was hit.

    Carries enough context for a structured refusal; callers must never
    fall back to a partial silent result.
    """

    def __init__(self, what: str, limit, actual):
        self.what = what
        self.limit = limit
        self.actual = actual
        super().__init__(f"{what}: {actual} exceeds cap {limit}")


class NotAUnitError(Sl2LabError, ArithmeticError):
    """Inverse requested for a non-unit ring element."""


class LevelZeroError(Sl2LabError):
    """Sandwich machinery refused: the normal subgroup has level ideal (0)."""


class ManyUnitsFailedError(Sl2LabError):
    """Sandwich verification requires a ring with many units."""
