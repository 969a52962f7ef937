"""Exception hierarchy shared across the package."""


class OrdinalDidError(Exception):
    """Base class for all package errors."""


class DomainError(OrdinalDidError):
    """An argument is outside the mathematical domain of an operation."""


class DataError(OrdinalDidError):
    """Input data violates a structural requirement (schema, duplicates, ...)."""


class EmptyCellError(DataError):
    """A group-time cell required for fitting contains no records."""


class NonIdentifiedError(OrdinalDidError):
    """The cell distribution does not pin down the latent parameters."""


class ConvergenceError(OrdinalDidError):
    """Optimizer failed to converge; carries the best iterate found.

    Attributes
    ----------
    best_x : array or None
        Best parameter vector seen before giving up.
    diagnostics : dict
        Iteration count, final gradient norm, objective value, message.
    """

    def __init__(self, message, best_x=None, diagnostics=None):
        super().__init__(message)
        self.best_x = best_x
        self.diagnostics = diagnostics or {}


class CovarianceError(OrdinalDidError):
    """A covariance matrix is not symmetric positive semi-definite."""


class CollinearityError(OrdinalDidError):
    """Design matrix is rank-deficient."""


class ConfigError(OrdinalDidError):
    """Invalid run configuration (CLI or simulation spec)."""
