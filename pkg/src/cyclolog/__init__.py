"""Exact and high-precision tools for approximating log(2 + zeta_m) in cyclotomic fields."""

from .errors import DomainError, InternalConsistencyError, UsageError

__version__ = "0.1.0"

__all__ = ["DomainError", "InternalConsistencyError", "UsageError", "__version__"]
