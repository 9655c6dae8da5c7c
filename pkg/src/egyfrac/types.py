"""The two parametric families behind A3(p), and the sandwich check.

Both families are indexed by (a, b, c, u) with gcd(a, b) = 1 and
c | a + b; write t = (a + b)/c.  A numerator m is

  Type I  when m*a*b*u = p + t    for some such tuple,
  Type II when m*a*b*u = 1 + p*t  for some such tuple,

and either equation reconstructs m/p as an explicit sum of three unit
fractions (see TypeWitness.parts).  For p >= 5 the union
{1,2,3} + {p,2p,3p} + TypeI + TypeII conjecturally *equals* the set of
representable numerators; sandwich_check compares both sides exactly.

Enumeration bounds (all against m <= 3p, u >= 1):

  Type I: (a-1)(b-1) <= ab <= p+t <= p + a + b forces a - 1 <=
  sqrt(p+1); for a = 1 every b <= p+1 can occur, otherwise
  b <= (p+1)/(a-1) + 1.  Scanning b by residue class mod t keeps the
  c | a + b constraint implicit.

  Type II: multiply the defining equation by a and substitute
  b = ct - a: t*(k*a*c - p) = k*a^2 + 1 where k = u*m, so any
  admissible (a, c, k) determines t and b.  From abu*m = 1 + pt and
  b >= a one gets k*a*c = p + (k*a^2+1+pa/...)/..., bounded by
  k*a*c <= 4p; witnesses with a > b are mirrors of ones with a <= b,
  so the a <= b scan is complete and min() over it is the global
  lexicographic minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import egypt
from ._kernels import TYPE_KERNEL_CAP, type1_mask, type2_mask
from .errors import CapacityError, PreconditionError

__all__ = [
    "TypeWitness",
    "TypeSets",
    "SandwichReport",
    "enumerate_type1",
    "enumerate_type2",
    "type1_values",
    "type2_values",
    "type_sets",
    "sandwich_check",
]


@dataclass(frozen=True)
class TypeWitness:
    """One (a, b, c, u) certificate that m is Type I or Type II for p."""

    kind: str  # "I" or "II"
    m: int
    p: int
    a: int
    b: int
    c: int
    u: int

    def __post_init__(self):
        if self.kind not in ("I", "II"):
            raise PreconditionError(f"bad witness kind {self.kind!r}")
        if min(self.m, self.p, self.a, self.b, self.c, self.u) < 1:
            raise PreconditionError(f"witness fields must be positive: {self}")
        if math.gcd(self.a, self.b) != 1:
            raise PreconditionError(f"gcd(a, b) != 1 in {self}")
        if (self.a + self.b) % self.c != 0:
            raise PreconditionError(f"c does not divide a + b in {self}")
        lhs = self.m * self.a * self.b * self.u
        if self.kind == "I" and lhs != self.p + self.t:
            raise PreconditionError(f"Type I equation fails for {self}")
        if self.kind == "II" and lhs != 1 + self.p * self.t:
            raise PreconditionError(f"Type II equation fails for {self}")

    @property
    def t(self) -> int:
        return (self.a + self.b) // self.c

    def parts(self) -> tuple[Fraction, Fraction, Fraction]:
        """The three unit fractions this witness assembles for m/p."""
        a, b, c, u, p = self.a, self.b, self.c, self.u, self.p
        if self.kind == "I":
            return (
                Fraction(1, a * b * u),
                Fraction(1, a * c * p * u),
                Fraction(1, b * c * p * u),
            )
        return (
            Fraction(1, p * a * b * u),
            Fraction(1, a * c * u),
            Fraction(1, b * c * u),
        )

    def holds(self) -> bool:
        """Exact check of the reconstruction identity sum(parts) = m/p."""
        return sum(self.parts()) == Fraction(self.m, self.p)

    def triple(self) -> egypt.UnitTriple:
        dens = sorted(f.denominator for f in self.parts())
        return egypt.UnitTriple(*dens)


def _check_p(p: int) -> None:
    if p < 2 or not egypt.arith.is_prime(p):
        raise PreconditionError(f"expected a prime, got {p}")
    if p > TYPE_KERNEL_CAP:
        raise CapacityError(f"p={p} beyond type-enumeration cap {TYPE_KERNEL_CAP}")


def _divisors_small(n: int) -> list[int]:
    """Divisors by trial division; fine for the n <= O(p) that occur here."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def enumerate_type1(p: int) -> dict[int, TypeWitness]:
    """Map m -> lexicographically least (a, b, c, u) Type I witness."""
    _check_p(p)
    best: dict[int, tuple[int, int, int, int]] = {}
    a = 1
    while (a - 1) * (a - 1) <= p + 1:
        bmax = p + 1 if a == 1 else (p + 1) // (a - 1) + 1
        for b in range(a, bmax + 1):
            if math.gcd(a, b) != 1:
                continue
            for c in _divisors_small(a + b):
                t = (a + b) // c
                if (p + t) % (a * b):
                    continue
                rest = (p + t) // (a * b)
                for m in _divisors_small(rest):
                    if m > 3 * p:
                        continue
                    key = (a, b, c, rest // m)
                    cur = best.get(m)
                    if cur is None or key < cur:
                        best[m] = key
        a += 1
    return {
        m: TypeWitness("I", m, p, a, b, c, u)
        for m, (a, b, c, u) in sorted(best.items())
    }


def enumerate_type2(p: int) -> dict[int, TypeWitness]:
    """Map m -> lexicographically least (a, b, c, u) Type II witness."""
    _check_p(p)
    best: dict[int, tuple[int, int, int, int]] = {}
    a = 1
    while a * a <= 4 * p:  # a <= b and a*b <= abum = 1 + pt <= ... keeps a small
        for c in range(1, 4 * p // a + 1):
            ac = a * c
            kmax = 4 * p // ac
            if c > a:
                # b = ct - a >= a and t >= 1 give k*a*(c - a) <= k*a*c - p + ...
                kmax = min(kmax, (p + 1) // (a * (c - a)))
            for k in range(p // ac + 1, kmax + 1):
                den = k * ac - p
                num = 1 + k * a * a
                if num % den:
                    continue
                t = num // den
                b = c * t - a
                if b < a or math.gcd(a, b) != 1:
                    continue
                for m in _divisors_small(k):
                    if m > 3 * p:
                        continue
                    key = (a, b, c, k // m)
                    cur = best.get(m)
                    if cur is None or key < cur:
                        best[m] = key
        a += 1
    return {
        m: TypeWitness("II", m, p, a, b, c, u)
        for m, (a, b, c, u) in sorted(best.items())
    }


def type1_values(p: int) -> tuple[int, ...]:
    """Sorted Type I numerators for p, via the compiled sweep."""
    _check_p(p)
    return tuple(int(m) for m in np.flatnonzero(type1_mask(p)))


def type2_values(p: int) -> tuple[int, ...]:
    """Sorted Type II numerators for p, via the compiled sweep."""
    _check_p(p)
    return tuple(int(m) for m in np.flatnonzero(type2_mask(p)))


@dataclass(frozen=True)
class TypeSets:
    p: int
    type1: tuple[int, ...]
    type2: tuple[int, ...]
    witnesses1: dict[int, TypeWitness]
    witnesses2: dict[int, TypeWitness]

    @property
    def overlap(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.type1) & set(self.type2)))


def type_sets(p: int, with_witnesses: bool = True) -> TypeSets:
    """Both families for p; witnesses come from the pure enumeration."""
    if with_witnesses:
        w1 = enumerate_type1(p)
        w2 = enumerate_type2(p)
        return TypeSets(p, tuple(w1), tuple(w2), w1, w2)
    return TypeSets(p, type1_values(p), type2_values(p), {}, {})


@dataclass(frozen=True)
class SandwichReport:
    """Exact comparison of the oracle set against the structured union.

    extra: representable numerators the union misses (would falsify
    completeness of the two families + trivial rows).
    missing: union members the oracle rejects (would falsify soundness).
    """

    p: int
    ok: bool
    a3: int
    union_size: int
    extra: tuple[int, ...]
    missing: tuple[int, ...]


def sandwich_check(p: int) -> SandwichReport:
    if p < 5:
        raise PreconditionError(
            f"sandwich_check needs p >= 5 (trivial rows overlap below), got {p}"
        )
    oracle = set(egypt.a3_exact(p).members)
    union = {1, 2, 3, p, 2 * p, 3 * p}
    union.update(type1_values(p))
    union.update(type2_values(p))
    extra = tuple(sorted(oracle - union))
    missing = tuple(sorted(union - oracle))
    return SandwichReport(
        p=p,
        ok=not extra and not missing,
        a3=len(oracle),
        union_size=len(union),
        extra=extra,
        missing=missing,
    )
