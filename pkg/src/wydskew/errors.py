"""Exception hierarchy shared by all modules."""


class WydSkewError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(WydSkewError, ValueError):
    """Input violates a structural invariant (Hermiticity, trace, parameter range)."""


class DomainError(WydSkewError, ValueError):
    """A function is evaluated outside the set where it is defined or finite."""


class NumericalError(WydSkewError, ArithmeticError):
    """A numerical procedure (finite differences, limits) failed to stabilise."""
