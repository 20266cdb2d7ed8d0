"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    """Base class for every error raised by quasifinite."""


class ParseError(WorkbenchError):
    """Malformed input document."""


class InvariantViolation(WorkbenchError):
    """A loaded structure breaks one or more of its invariants.

    ``violations`` lists every problem found, each a short string naming
    the offending location.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        head = self.violations[0] if self.violations else "unknown"
        more = len(self.violations) - 1
        msg = head if more <= 0 else f"{head} (and {more} more)"
        super().__init__(msg)


class OutOfWindow(WorkbenchError):
    """A structure constant needed by a computation is not certified."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class NonRationalSpectrum(WorkbenchError):
    """A minimal polynomial has an irreducible factor of degree > 1."""

    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"irreducible factor of degree {factor.degree}: {factor}")


class NotConverged(WorkbenchError):
    """A slice required by a computation did not stabilize across windows."""


class StepLimitExceeded(WorkbenchError):
    """Straightening hit its step bound before reaching normal form."""


class IncompatibleAlgebras(WorkbenchError):
    """Module and bimodule refer to different algebras."""


class CapTooSmall(WorkbenchError):
    """Level cap below n + gap; the E_n extraction would be unfaithful."""
