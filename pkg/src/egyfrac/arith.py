"""Exact integer arithmetic primitives.

Everything downstream (the Egyptian-fraction oracle, the witness
enumerations, the analytic inequality checks) reduces to a handful of
exact primitives collected here:

    sieve_primes(limit)     segmented prime sieve, ascending numpy array
    PrimeTable              sieve output plus O(log) membership/count queries
    is_prime(n)             deterministic Miller-Rabin (full 64-bit range)
    factorize(n)            trial division + Brent's rho, sorted (p, e) list
    divisors(n)             sorted divisor list
    tau(n), phi(n)          divisor count / Euler totient via factorize
    jacobi(a, q)            Jacobi symbol, odd positive q
    pi_ap(x, q, a)          exact count of primes p <= x with p = a (mod q)
    phi_table(limit)        totients 0..limit in one sieve pass

No floating point enters any counting path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError, PreconditionError

#: Largest sieve limit accepted before we refuse on memory grounds.
MAX_SIEVE_LIMIT = 1 << 32

_SEGMENT = 1 << 20


def _simple_sieve(limit: int) -> np.ndarray:
    """Plain boolean sieve, used for base primes and small tables."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if mask[i]:
            mask[i * i :: i] = False
    return np.flatnonzero(mask).astype(np.int64)


def sieve_primes(limit: int, segment_size: int = _SEGMENT) -> np.ndarray:
    """Return all primes <= limit as an ascending int64 array.

    The sieve is segmented: memory stays O(segment_size + number of
    primes), so limit=10**8 is fine even though a dense boolean array
    for the whole range would not be.
    """
    if limit > MAX_SIEVE_LIMIT:
        raise CapacityError(f"sieve limit {limit} exceeds {MAX_SIEVE_LIMIT}")
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    if limit <= segment_size:
        return _simple_sieve(limit)

    base = _simple_sieve(math.isqrt(limit))
    chunks = [base]
    lo = int(base[-1]) + 1
    while lo <= limit:
        hi = min(lo + segment_size - 1, limit)
        mask = np.ones(hi - lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            mask[start - lo :: p] = False
        chunks.append(np.flatnonzero(mask).astype(np.int64) + lo)
        lo = hi + 1
    return np.concatenate(chunks)


@dataclass(frozen=True)
class PrimeTable:
    """A sieve result bundled with its limit for membership queries."""

    limit: int
    primes: np.ndarray

    @classmethod
    def build(cls, limit: int) -> "PrimeTable":
        return cls(limit, sieve_primes(limit))

    def count_leq(self, x: int) -> int:
        """pi(x) for x <= limit."""
        if x > self.limit:
            raise PreconditionError(f"x={x} beyond table limit {self.limit}")
        return int(np.searchsorted(self.primes, x, side="right"))

    def contains(self, n: int) -> bool:
        if n > self.limit:
            raise PreconditionError(f"n={n} beyond table limit {self.limit}")
        i = int(np.searchsorted(self.primes, n))
        return i < len(self.primes) and int(self.primes[i]) == n

    def primes_leq(self, x: int) -> np.ndarray:
        if x > self.limit:
            raise PreconditionError(f"x={x} beyond table limit {self.limit}")
        return self.primes[: int(np.searchsorted(self.primes, x, side="right"))]


_shared_table: PrimeTable | None = None


def shared_table(x: int) -> PrimeTable:
    """Module-level prime table, grown geometrically on demand."""
    global _shared_table
    if _shared_table is None or _shared_table.limit < x:
        _shared_table = PrimeTable.build(max(x, 1 << 16))
    return _shared_table


# Trial-division primes: enough to fully factor anything below 10**6
# and to strip small factors before rho takes over.
_TRIAL_PRIMES: list[int] = [int(p) for p in _simple_sieve(4096)]

# Deterministic Miller-Rabin witness sets (Pomerance/Selfridge/Wagstaff,
# Jaeschke, Sinclair).  Each entry: (bound, bases valid below bound).
_MR_SETS = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (9_080_191, (31, 73)),
    (25_326_001, (2, 3, 5)),
    (3_215_031_751, (2, 3, 5, 7)),
    (4_759_123_141, (2, 7, 61)),
    (1_122_004_669_633, (2, 13, 23, 1662803)),
    (2_152_302_898_747, (2, 3, 5, 7, 11)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (1 << 81, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)


def _mr_witness(n: int, a: int) -> bool:
    """True if a witnesses compositeness of odd n > 2."""
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2**81 (covers all 64-bit input)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    for bound, bases in _MR_SETS:
        if n < bound:
            return not any(_mr_witness(n, a % n) for a in bases if a % n)
    raise CapacityError(f"is_prime input {n} beyond supported range")


def _brent_rho(n: int) -> int:
    """Return a nontrivial factor of odd composite n (deterministic restarts)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")  # pragma: no cover


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as a sorted list of (prime, exponent).

    Trial division by primes below 4096 resolves every n < 10**6 outright
    (and strips small factors otherwise); what survives is split by
    deterministic Miller-Rabin plus Brent's rho.
    """
    if n < 1:
        raise PreconditionError(f"factorize requires n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        stack = [n]
        while stack:
            v = stack.pop()
            if is_prime(v):
                out[v] = out.get(v, 0) + 1
                continue
            d = _brent_rho(v)
            stack.append(d)
            stack.append(v // d)
    return sorted(out.items())


def divisors(n: int) -> list[int]:
    """All positive divisors of n >= 1, ascending."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def tau(n: int) -> int:
    """Number of divisors of n >= 1."""
    out = 1
    for _, e in factorize(n):
        out *= e + 1
    return out


def phi(n: int) -> int:
    """Euler totient of n >= 1."""
    out = n
    for p, _ in factorize(n):
        out -= out // p
    return out


def jacobi(a: int, q: int) -> int:
    """Jacobi symbol (a/q) for odd positive q; (a/1) = 1.

    a is reduced mod q first, so negative or large arguments are fine.
    Even or nonpositive q is a domain error, not a silent 0.
    """
    if q <= 0 or q % 2 == 0:
        raise DomainError(f"Jacobi symbol needs odd positive modulus, got {q}")
    a %= q
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if q % 8 in (3, 5):
                result = -result
        a, q = q, a
        if a % 4 == 3 and q % 4 == 3:
            result = -result
        a %= q
    return result if q == 1 else 0


def pi_ap(x: int, q: int, a: int, table: PrimeTable | None = None) -> int:
    """Exact number of primes p <= x with p = a (mod q).

    No analytic shortcut: the count is read off a sieve, including the
    degenerate classes with gcd(a, q) > 1 (which hold at most one prime).
    """
    if q < 1:
        raise PreconditionError(f"modulus must be >= 1, got {q}")
    if not 0 <= a < q:
        raise PreconditionError(f"residue {a} not in [0, {q})")
    if x < 2:
        return 0
    if table is None:
        table = shared_table(x)
    primes = table.primes_leq(x)
    if q == 1:
        return len(primes)
    # Two equivalent strategies; pick the cheaper one.
    if x // q + 1 < len(primes):
        start = a if a >= 2 else a + q
        if start > x:
            return 0
        vals = np.arange(start, x + 1, q, dtype=np.int64)
        idx = np.searchsorted(primes, vals)
        idx[idx == len(primes)] = 0
        return int(np.count_nonzero(primes[idx] == vals))
    return int(np.count_nonzero(primes % q == a))


def phi_table(limit: int) -> np.ndarray:
    """Totients of 0..limit by the sieve recurrence (phi[0] unused)."""
    ph = np.arange(limit + 1, dtype=np.int64)
    for p in sieve_primes(limit):
        ph[p::p] -= ph[p::p] // p
    return ph
