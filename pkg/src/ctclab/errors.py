"""Exception types shared across the package."""


class CtcLabError(Exception):
    """Base class for every error this package raises on purpose."""


class ShapeError(CtcLabError):
    """Operands have malformed or incompatible dimensions."""


class DomainError(CtcLabError):
    """An input violates a mathematical precondition."""


class SizingError(CtcLabError):
    """A requested dimension exceeds the configured maximum."""


class PayloadError(CtcLabError):
    """A file-referenced payload (matrix or state JSON) is invalid."""


class SolverError(CtcLabError):
    """Fixed-point solving or refinement failed.

    Carries the best iterate reached so far, when one exists, so callers
    can inspect how close the solver got.
    """

    def __init__(self, message: str, best_iterate=None):
        super().__init__(message)
        self.best_iterate = best_iterate
