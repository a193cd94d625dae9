"""Exception hierarchy shared by every module."""


class TridiffError(Exception):
    pass


class ValidationError(TridiffError, ValueError):
    """A parameter violates its documented constraint."""


class GeometryError(ValidationError):
    pass


class InfeasibleError(TridiffError):
    """Constraints contradict each other (e.g. fixed speeds violating the sum rule)."""


class IndeterminateError(TridiffError):
    """Constraints leave at least one degree of freedom unresolved."""


class FitError(ValidationError):
    """Pipe radius outside the clamp's reachable band."""


class ObstacleTooLargeError(ValidationError):
    pass


class PlanMismatchError(ValidationError):
    """Traversal plan does not match the pipe network."""
