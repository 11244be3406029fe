"""Exception hierarchy shared by all triq modules."""


class TriqError(Exception):
    """Base class for every error raised by triq."""


class InvalidConfigError(TriqError, ValueError):
    """Model or run parameters violate their invariants."""


class ConvergenceError(TriqError, ArithmeticError):
    """An iterative numeric routine failed to converge."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class AnalyticDomainError(TriqError, ArithmeticError):
    """A closed-form expression is undefined at the requested point.

    Callers are expected to fall back to the numeric path.
    """


class BranchAmbiguityError(AnalyticDomainError):
    """The point sits on a piecewise threshold of a closed form."""


class UnsupportedBranchError(AnalyticDomainError):
    """No closed form exists for the requested anisotropy."""


class UsageError(TriqError, ValueError):
    """Invalid combination of user-facing options."""
