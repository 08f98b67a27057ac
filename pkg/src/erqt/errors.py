"""Exception hierarchy shared by all erqt modules."""


class ErqtError(Exception):
    """Base class for every error raised by erqt."""


class InvalidParameterError(ErqtError, ValueError):
    pass


class InvalidBiasError(InvalidParameterError):
    pass


class InvalidOccupancyError(InvalidParameterError):
    pass


class NotProportionalError(ErqtError):
    """Raised when a formula needs proportional coupling and the junction lacks it."""


class UnsupportedKindError(ErqtError):
    """Raised when a route is not defined for the junction's relaxation kind."""


class SingularMatrixError(ErqtError, ArithmeticError):
    pass


class UndampedSubspaceError(ErqtError):
    """The dynamics has an undamped mode, so the steady state is not unique."""


class QuadratureError(ErqtError):
    """Adaptive integration did not reach its tolerance.

    The best available estimate is kept on the exception so callers can still
    report it.
    """

    def __init__(self, message, value=None, abs_error=None, n_evaluations=0):
        super().__init__(message)
        self.value = value
        self.abs_error = abs_error
        self.n_evaluations = n_evaluations


class ConfigError(ErqtError, ValueError):
    """Scenario file could not be parsed or failed validation.

    ``where`` is a line number (parse errors) or a dotted key path
    (validation errors).
    """

    def __init__(self, message, where=None):
        if where is not None:
            message = f"{where}: {message}"
        super().__init__(message)
        self.where = where
