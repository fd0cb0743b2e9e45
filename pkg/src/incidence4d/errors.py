"""Exception types shared across the package."""


class IncidenceError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(IncidenceError, ValueError):
    pass


class ZeroDirectionError(IncidenceError, ValueError):
    pass


class IdenticallyZeroError(IncidenceError, ValueError):
    """A univariate polynomial that must be nonzero vanished identically."""


class DegenerateSystemError(IncidenceError):
    """A resultant input contains an identically zero form."""


class IllConditionedMacaulayError(IncidenceError):
    """Every tried coordinate frame gave a singular Macaulay denominator."""


class ZeroFormsError(IncidenceError):
    """Some osculation form F_i vanishes identically, so the resultant is undefined."""


class NotOnVarietyError(IncidenceError, ValueError):
    pass


class RootFindingError(IncidenceError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class EliminationError(IncidenceError):
    pass


class ResourceLimitError(IncidenceError):
    pass


class ConfigError(IncidenceError, ValueError):
    pass
