"""Exception hierarchy."""


class CasimirTorqueError(Exception):
    """Base class for all errors raised by this package."""


class StaticDivergenceError(CasimirTorqueError, ZeroDivisionError):
    """Undamped free-carrier response evaluated at zero frequency."""


class DomainError(CasimirTorqueError, ValueError):
    """Argument outside the domain of a formula."""


class OutOfRangeError(CasimirTorqueError, ValueError):
    """Interpolation requested outside tabulated data."""


class SingularDenominatorError(CasimirTorqueError, ArithmeticError):
    """Integrand denominator vanished (ideal |r| = 1 closure)."""


class NonConvergenceError(CasimirTorqueError, ArithmeticError):
    """Adaptive quadrature exhausted its subdivision budget."""

    def __init__(self, message, value=None, error_estimate=None, evaluations=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class SingularBracketError(CasimirTorqueError, ArithmeticError):
    """Non-invertible 2x2 matrix in the Green's function construction."""


class InconsistentConstantError(CasimirTorqueError):
    """Green's-kernel normalisation differs between reference points."""


class ConfigError(CasimirTorqueError, ValueError):
    """Invalid run configuration document."""
