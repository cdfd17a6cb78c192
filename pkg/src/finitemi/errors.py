"""Exception types raised by finitemi."""


class FiniteMIError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FiniteMIError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class UnsupportedOperationError(FiniteMIError, TypeError):
    """The operation is not available for this kind of kernel or spectrum."""


class NumericalError(FiniteMIError, ArithmeticError):
    """A numerical routine failed or did not meet its accuracy target."""


class NumericalSingularityError(NumericalError):
    """A matrix factorization failed even after diagonal jitter.

    ``jitter`` is the absolute diagonal shift that was last attempted.
    """

    def __init__(self, message, jitter=0.0):
        super().__init__(message)
        self.jitter = jitter


class QuadratureAccuracyError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance.

    ``estimate`` and ``abserr`` hold the best value reached.
    """

    def __init__(self, message, estimate, abserr):
        super().__init__(message)
        self.estimate = estimate
        self.abserr = abserr


class ConfigError(FiniteMIError, ValueError):
    """Malformed experiment configuration."""
