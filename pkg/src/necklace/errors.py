"""Exception types shared across the package."""


class NecklaceError(ValueError):
    """Base class for invalid-input errors."""


class ZeroTotalMass(NecklaceError):
    pass


class NegativeCell(NecklaceError):
    pass


class OutOfRange(NecklaceError):
    pass


class UnknownColor(NecklaceError):
    pass


class IndexOutOfRange(NecklaceError, IndexError):
    pass


class ShapeMismatch(NecklaceError):
    pass


class NotTwoColors(NecklaceError):
    pass


class BudgetMismatch(NecklaceError):
    pass


class EmptyRegion(NecklaceError):
    pass


class NotDivisible(NecklaceError):
    pass


class TooLarge(NecklaceError):
    pass


class InvalidParameter(NecklaceError):
    pass


class NotPrime(NecklaceError):
    pass


class SearchExhausted(RuntimeError):
    """The heuristic search ran out of budget without meeting tolerance."""

    def __init__(self, message, best=None, best_residual=float("inf")):
        super().__init__(message)
        self.best = best
        self.best_residual = best_residual


class Mismatch(AssertionError):
    """Two independent computations that must agree did not."""


class FixedCellFound(AssertionError):
    pass
