"""egyfrac: exact counting of three-unit-fraction representations m/p,
the two parametric witness families behind them, and empirical scaling
checks for the analytic inequalities that bound their growth."""

from . import aggregate, analytic, arith, egypt, types
from .errors import (
    CacheIntegrityError,
    CapacityError,
    DomainError,
    EgyfracError,
    PreconditionError,
    StaleCacheError,
)

__version__ = "0.1.0"

__all__ = [
    "aggregate",
    "analytic",
    "arith",
    "egypt",
    "types",
    "EgyfracError",
    "CapacityError",
    "DomainError",
    "PreconditionError",
    "CacheIntegrityError",
    "StaleCacheError",
    "__version__",
]
