"""Exception hierarchy shared by all modules."""


class OWCError(Exception):
    """Base class for every error raised by this package."""


class DomainError(OWCError, ValueError):
    """Argument outside the domain where a formula or model is valid."""


class NonConvergence(OWCError, ArithmeticError):
    """Iterative or adaptive routine exhausted its budget above tolerance."""

    def __init__(self, message, value=None, err_estimate=None, label=None):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate
        self.label = label


class EvaluationFailure(OWCError, ArithmeticError):
    """An integrand returned a non-finite value."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class NotSymmetric(OWCError, ValueError):
    """A closed form that only covers the midpoint relay was given unequal hops."""


class SingularParameter(OWCError, ArithmeticError):
    """Closed form divides by m = z - rho^2 and |m| is below the guard."""


class ConfigError(OWCError, ValueError):
    """Invalid run configuration."""
