"""Exact representation of reduced fractions by two or three unit fractions.

The two-term solver is the workhorse: 1/x + 1/y = r/s is equivalent to
(rx - s)(ry - s) = s^2, so solutions correspond to divisors d of s^2
with d = -s (mod r) (take d <= s for the normalized x <= y pair; the
congruence is preserved under d -> s^2/d, so existence checks may scan
all divisors).  The three-term oracle peels off the smallest
denominator m1 and delegates the remainder.

a3_exact(p) counts the numerators m <= 3p for which m/p splits into
three unit fractions — by definition the quantity A3(p).  For p up to
ORACLE_KERNEL_CAP the scan runs in the compiled kernel; beyond that (or
in distinct mode) a plain-Python path with the same structure takes
over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith
from ._kernels import DIVBUF_LEN, ORACLE_KERNEL_CAP, oracle_mask, spf_table
from .errors import CapacityError, PreconditionError

#: a3_exact refuses primes beyond this (the pure-Python fallback that
#: serves p > ORACLE_KERNEL_CAP gets painfully slow long before 2^17).
A3_EXACT_CAP = 1 << 17


@dataclass(frozen=True, order=True)
class ReducedFraction:
    """A positive rational num/den in lowest terms."""

    num: int
    den: int

    def __post_init__(self):
        if self.num < 1 or self.den < 1:
            raise PreconditionError(
                f"fraction must be positive: {self.num}/{self.den}"
            )
        if math.gcd(self.num, self.den) != 1:
            raise PreconditionError(
                f"{self.num}/{self.den} is not in lowest terms"
            )

    @classmethod
    def reduce(cls, num: int, den: int) -> "ReducedFraction":
        g = math.gcd(num, den)
        return cls(num // g, den // g)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)


@dataclass(frozen=True, order=True)
class UnitTriple:
    """Denominators m1 <= m2 <= m3 of a sum of three unit fractions."""

    m1: int
    m2: int
    m3: int

    def __post_init__(self):
        if not 1 <= self.m1 <= self.m2 <= self.m3:
            raise PreconditionError(f"triple not normalized: {self}")

    def value(self) -> Fraction:
        return (
            Fraction(1, self.m1) + Fraction(1, self.m2) + Fraction(1, self.m3)
        )


def _divisors_of_square(s: int) -> list[int]:
    """Sorted divisors of s^2, from one factorization of s."""
    divs = [1]
    for q, e in arith.factorize(s):
        divs = [d * q**k for d in divs for k in range(2 * e + 1)]
    divs.sort()
    return divs


def two_term_solutions(f: ReducedFraction) -> list[tuple[int, int]]:
    """All pairs x <= y with 1/x + 1/y = f, sorted by x.

    Complete and duplicate-free: d runs over divisors of s^2 with
    d <= s and d = -s (mod r); then x = (s+d)/r, y = (s + s^2/d)/r.
    """
    r, s = f.num, f.den
    out = []
    s2 = s * s
    for d in _divisors_of_square(s):
        if d > s:
            break
        if (d + s) % r == 0:
            out.append(((s + d) // r, (s + s2 // d) // r))
    return out


def _splits_in_two(r: int, s: int) -> bool:
    """Existence-only test for 1/x + 1/y = r/s with gcd(r, s) = 1."""
    if r <= 2:
        # r=1: 1/(2s)+1/(2s); r=2: s is odd, 1/s+1/s.
        return True
    if (s + 1) % r == 0:
        return True
    if s % 2 == 0 and (s + 2) % r == 0:
        return True
    target = (-s) % r
    return any(d % r == target for d in _divisors_of_square(s))


def _m1_range(m: int, n: int) -> range:
    """First-denominator candidates for m/n: n/m < m1 <= 3n/m."""
    return range(n // m + 1, 3 * n // m + 1)


def three_term_exists(f: ReducedFraction) -> bool:
    """True iff some UnitTriple sums to f.

    The smallest denominator m1 of any representation satisfies
    n/m < m1 <= 3n/m, and for each m1 the remainder is a two-term
    problem.  Cheap residue conditions settle most m1 before any
    factoring happens (same two-pass shape as the compiled sweep).
    """
    m, n = f.num, f.den
    pending = []
    for m1 in _m1_range(m, n):
        r0 = m * m1 - n
        g = math.gcd(r0, n * m1)
        r = r0 // g
        s = n * m1 // g
        if r <= 2 or (s + 1) % r == 0 or (s % 2 == 0 and (s + 2) % r == 0):
            return True
        pending.append((r, s))
    return any(_splits_in_two(r, s) for r, s in pending)


def three_term_enumerate(
    f: ReducedFraction, cap: int | None = None
) -> list[UnitTriple]:
    """All UnitTriples summing to f, lexicographic; truncated at cap."""
    m, n = f.num, f.den
    out: list[UnitTriple] = []
    for m1 in _m1_range(m, n):
        rem = ReducedFraction.reduce(m * m1 - n, n * m1)
        for x, y in two_term_solutions(rem):
            if x >= m1:
                out.append(UnitTriple(m1, x, y))
                if cap is not None and len(out) >= cap:
                    return out
    return out


def _distinct_representable(m: int, p: int) -> bool:
    """Oracle for the strict mode: three pairwise distinct denominators."""
    if m % p == 0:
        # m/p in {1,2,3}: only 1 = 1/2 + 1/3 + 1/6 works distinctly
        # (the largest distinct sum is 1 + 1/2 + 1/3 < 2).
        return m // p == 1
    for m1 in _m1_range(m, p):
        rem = ReducedFraction.reduce(m * m1 - p, p * m1)
        if any(m1 < x < y for x, y in two_term_solutions(rem)):
            return True
    return False


@dataclass(frozen=True)
class A3Result:
    value: int
    members: tuple[int, ...]


def a3_exact(p: int, distinct: bool = False) -> A3Result:
    """A3(p) with the witnessing numerator set.

    m ranges over 1..3p (three unit fractions sum to at most 3).  The
    default counts representations with repeats allowed; distinct=True
    switches to pairwise-distinct denominators (slower, pure Python).
    """
    if not arith.is_prime(p):
        raise PreconditionError(f"a3_exact needs a prime, got {p}")
    if p > A3_EXACT_CAP:
        raise CapacityError(f"p={p} beyond a3_exact cap {A3_EXACT_CAP}")
    if distinct:
        members = [
            m for m in range(1, 3 * p + 1) if _distinct_representable(m, p)
        ]
    elif p <= ORACLE_KERNEL_CAP:
        mask = oracle_mask(
            p, spf_table(3 * p), np.zeros(DIVBUF_LEN, dtype=np.int64)
        )
        members = [int(m) for m in np.flatnonzero(mask)]
    else:
        members = [
            m
            for m in range(1, 3 * p + 1)
            if m % p == 0
            or three_term_exists(ReducedFraction(m, p))
        ]
    return A3Result(len(members), tuple(members))
