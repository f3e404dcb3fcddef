"""Exception types shared across the package.

The CLI maps these onto exit statuses: precondition/hypothesis failures
exit 2, parse errors exit 3, resource-guard aborts exit 4.
"""


class FpureError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(FpureError):
    """A documented hypothesis or precondition of an operation failed."""


class NotQuasiHomogeneousError(PreconditionError):
    """Input is not homogeneous for the ring's weight grading.

    ``offending`` holds up to two term strings witnessing distinct degrees.
    """

    def __init__(self, message: str, offending: tuple = ()):
        super().__init__(message)
        self.offending = offending


class ParseError(FpureError):
    """Malformed polynomial or family text.  Carries a 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnsupportedFamilyError(ParseError):
    """Family text where the parameter occurs nonlinearly."""


class ResourceLimitError(FpureError):
    """A computation was aborted by the term-count guard.

    ``partial`` may carry partial results (e.g. the ladder entries computed
    before the abort).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
