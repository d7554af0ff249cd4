"""Exception types shared across the package.

Three failure modes are distinguished so the command line tool can map
them to distinct exit codes: a request outside a function's mathematical
domain, a request beyond the sizes this desk-scale code is willing to
attempt, and a numerical result that missed its accuracy target.
"""


class QcongError(Exception):
    """Base class for package-specific errors."""


class DomainError(QcongError):
    """Input violates a mathematical precondition (wrong parity,
    shared factor, argument off the allowed range)."""


class ScaleCapError(QcongError):
    """Input is valid but larger than the supported desk scale."""


class ToleranceError(QcongError):
    """A computed quantity failed to meet its accuracy target."""
