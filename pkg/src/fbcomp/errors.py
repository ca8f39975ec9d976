"""Exception types shared across the solvers and diagnostics."""


class FbcompError(Exception):
    """Base class for all package errors."""


class InvalidSpec(FbcompError):
    """A solver spec violates its invariants."""


class InvalidState(FbcompError):
    """A simulation state violates its invariants."""


class NonConvergence(FbcompError):
    """An iterative solve failed to reach tolerance."""


class BracketFailure(FbcompError):
    """A bisection bracket does not contain a sign change."""


class StabilityFailure(FbcompError):
    """Time stepping produced NaN/Inf or an undershoot beyond tolerance."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class DomainTooSmall(FbcompError):
    """A free boundary reached the edge of the truncated domain."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class WindowTooShort(FbcompError):
    """Not enough samples in the requested fit window."""


class EmptyBand(FbcompError):
    """A requested radius band is empty."""


class ConditionViolated(FbcompError):
    """Initial data fails a scenario precondition."""


class PresetUnreachable(FbcompError):
    """A preset search loop exhausted its bounds."""
