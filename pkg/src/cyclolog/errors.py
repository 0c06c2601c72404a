class DomainError(ValueError):
    """Argument outside the domain of a function (pole, branch cut, log of zero)."""


class UsageError(ValueError):
    """Caller violated a documented precondition."""


class InternalConsistencyError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""
