"""Exception types shared across the package."""


class GenBilinearError(Exception):
    """Base class for all package errors."""


class PoleError(GenBilinearError, ZeroDivisionError):
    """Raised when a function is evaluated at one of its poles."""


class DomainError(GenBilinearError, ValueError):
    """Raised when an argument lies outside the supported region."""


class ConvergenceError(GenBilinearError, ArithmeticError):
    """Raised when a series, quadrature or extrapolation fails to converge."""


class InvalidExpansionError(GenBilinearError, ValueError):
    """Raised when a singular expansion does not make the integrand integrable."""
