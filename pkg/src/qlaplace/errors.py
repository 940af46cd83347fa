"""Exception hierarchy shared by every module."""


class QError(Exception):
    """Base class for all library errors."""


class DomainError(QError, ValueError):
    """Argument outside the region where the quantity is defined."""


class PoleError(QError):
    """A denominator factor of a series or product vanishes."""


class NonConvergence(QError):
    """Term budget exhausted before the error bound closed."""


class DegenerateError(QError):
    """Equation is not genuinely of second order."""


class InfinityError(QError):
    """An exponent needed by the operation is zero or infinite."""


class FuchsViolation(QError):
    """Exponent data does not satisfy the product relation."""


class ZeroParam(QError, ValueError):
    """A transformation parameter that must be nonzero is zero."""


class NonPolynomial(QError):
    """A gauge left a coefficient that is not a polynomial."""


class BranchError(QError):
    """No canonical branch exists for a square root or power."""


class PreconditionError(QError):
    """Input does not meet the precondition of the operation."""


class ExcludedInput(QError):
    """Matrix system belongs to an excluded class."""
