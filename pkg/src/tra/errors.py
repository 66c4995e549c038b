"""Exception hierarchy shared by all modules."""


class TRAError(Exception):
    """Base class for every error raised by the package."""


class InvalidParameter(TRAError, ValueError):
    pass


class DomainError(TRAError, ValueError):
    pass


class InvalidBasis(TRAError, ValueError):
    pass


class LimitUndefined(TRAError, ValueError):
    """Endpoint value of a basis function diverges (negative exponent)."""


class SingularKineticBalance(TRAError, ZeroDivisionError):
    pass


class SingularPrefactor(TRAError, ZeroDivisionError):
    pass


class IntegrationError(TRAError, ArithmeticError):
    pass


class NotReducible(TRAError):
    pass


class NotTridiagonalizable(TRAError):
    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class LinearityCheckFailed(TRAError):
    pass


class RecursionBreakdown(TRAError, ArithmeticError):
    pass


class ConvergenceFailure(TRAError, ArithmeticError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NoRoot(TRAError, ArithmeticError):
    pass


class InvalidBoundState(TRAError, ValueError):
    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint


class ResolutionError(TRAError, ArithmeticError):
    pass


class MissingSpectrum(TRAError):
    pass


class SeriesDivergence(TRAError, ArithmeticError):
    pass


class SingularCoupling(TRAError, ZeroDivisionError):
    def __init__(self, message, locations=()):
        super().__init__(message)
        self.locations = list(locations)


class ZeroField(TRAError, ValueError):
    pass


class GridError(TRAError, ValueError):
    pass


class InvalidProfile(TRAError, ValueError):
    pass


class ConfigError(TRAError):
    """Base for configuration-file problems (CLI exit code 3)."""


class UnknownEntry(ConfigError, KeyError):
    def __init__(self, name, valid=()):
        self.name = name
        self.valid = sorted(valid)
        super().__init__(f"unknown entry {name!r}; valid ids: {', '.join(self.valid)}")

    def __str__(self):
        return self.args[0]


class MissingParameter(ConfigError):
    pass


class ParseError(ConfigError):
    pass


class IoError(TRAError, OSError):
    pass
