"""Error taxonomy shared across the package.

Everything derives from EgyfracError so callers can catch broadly; the
ValueError mixin keeps the arithmetic helpers usable as drop-in utilities.
"""


class EgyfracError(Exception):
    """Base class for all errors raised by this package."""


class CapacityError(EgyfracError, ValueError):
    """Input exceeds a configured size budget (sieve limit, prime cap, ...)."""


class DomainError(EgyfracError, ValueError):
    """Argument outside the mathematical domain (e.g. Jacobi with even modulus)."""


class PreconditionError(EgyfracError, ValueError):
    """A documented precondition between arguments does not hold."""


class CacheIntegrityError(EgyfracError):
    """Cache file is corrupted (bad checksum, malformed rows)."""


class StaleCacheError(EgyfracError):
    """Cache file is valid but belongs to a different version, x, or flag set."""
