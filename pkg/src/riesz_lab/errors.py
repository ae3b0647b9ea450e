"""Exception hierarchy shared by all modules.

Validation problems derive from ``ValueError`` and map to CLI exit code 2;
numerical failures derive from ``ArithmeticError`` and map to exit code 3.
"""


class RieszLabError(Exception):
    """Base class for every error raised by the package."""


class DomainError(RieszLabError, ValueError):
    """A parameter or input violates a mathematical precondition."""


class UnsupportedAlgebraError(DomainError):
    """The requested operation is not available for this algebra."""


class NumericalError(RieszLabError, ArithmeticError):
    """A computation failed for numerical reasons."""


class NotPositiveDefiniteError(NumericalError):
    """A Cholesky pivot was not strictly positive."""


class QuadratureError(NumericalError):
    """An integration rule did not reach its tolerance."""


class RejectedDrawError(NumericalError):
    """A sampler exhausted its retry budget at the boundary of its support."""

    def __init__(self, message: str, retries: int):
        super().__init__(f"{message} (after {retries} retries)")
        self.retries = retries
