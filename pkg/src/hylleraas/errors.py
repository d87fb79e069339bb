"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the region where a formula is real and finite."""


class DegenerateInputError(DomainError):
    """The couplings collapse to a point where a formula divides by zero."""


class ConvergenceError(RuntimeError):
    """An iterative or adaptive procedure ran out of budget."""


class SingularMatrixError(ArithmeticError):
    """The overlap matrix is not numerically positive definite.

    ``vector`` carries the raw eigenvector when normalization to a unit
    leading coefficient was the step that failed.
    """

    def __init__(self, message, vector=None):
        super().__init__(message)
        self.vector = vector


class MissingDataError(LookupError):
    """Requested reference data does not exist in the embedded tables."""
