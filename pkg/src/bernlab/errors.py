"""Exception hierarchy shared by every module.

Two families matter to callers: :class:`DomainError` (bad input, exit code 2
in the CLI) and :class:`NumericalError` (a computation that did not converge
or produced garbage, exit code 1).
"""


class BernlabError(Exception):
    """Base class for all package errors."""


class DomainError(BernlabError, ValueError):
    """Input outside the mathematical domain of an operation."""


class UnsupportedExponent(DomainError):
    """Quasinorm exponent p < 1 passed to a solver."""


class PoleError(DomainError):
    """Gamma function evaluated at a nonpositive integer."""


class DegreeTooLarge(DomainError):
    """Basis conversion requested beyond the conditioning cap."""


class GridError(DomainError):
    """Quadrature grid does not tile its interval."""


class NoBracket(DomainError):
    """Root finder called without a sign change on the bracket."""


class Overflow(DomainError):
    """A derived quantity would exceed the representable range."""


class NumericalError(BernlabError, ArithmeticError):
    """A numerical procedure failed."""


class NonFinite(NumericalError):
    """A function evaluation returned inf or nan."""


class QuadratureError(NumericalError):
    """Quadrature of a norm did not converge."""


class LPInfeasible(NumericalError):
    """The L1 linear program reported infeasibility."""


class Stalled(NumericalError):
    """Iteration limit reached without convergence."""


class Unstable(NumericalError):
    """Extrapolation estimates diverge."""
