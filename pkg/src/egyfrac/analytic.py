"""Empirical checks of the analytic inequalities behind the A3 growth bound.

Everything here evaluates one side of an inequality *exactly* (integer
or rational arithmetic) and compares against the envelope the asymptotic
argument predicts.  No constants are trusted: scaling claims are turned
into bounded-ratio tables checked by quartile_rule (max ratio over the
top quartile of sizes must stay within a factor 2 of the middle
quartile).

Logarithms: every envelope uses log base 2, except bt_check, whose
2x/(phi(q) ln(x/q)) bound is the classical natural-log statement (it is
numerically false in base 2 at small x).

All reductions are deterministic (sorted iteration + math.fsum), so
repeated runs and any data-parallel split reduce to identical floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np

from . import arith, types
from ._kernels import sqrt_tables, tau_row
from .errors import CapacityError, PreconditionError

#: exact tuple counting T(x) and its pi(x; q, a) comparison stay desk-scale
T_COUNT_CAP = 5000
#: dyadic band sums need tau(a*q+1) for every q <= x, a | q
DYADIC_SUM_CAP = 1 << 16
#: tau_sum grid capacity: k*A*(2B)^2 must stay below this
TAU_SUM_CAP = 1 << 42


# ---------------------------------------------------------------------------
# ratio-table plumbing


@dataclass(frozen=True)
class RatioRow:
    """One cell of a scaling table: exact sum, envelope, their ratio.

    raw_sum is an int, Fraction, or float depending on the operation;
    ratio is |raw_sum| / envelope (sums that can be negative keep their
    sign in raw_sum).  extras carries operation-specific side values.
    """

    params: dict
    raw_sum: object
    envelope: float
    ratio: float
    extras: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = dict(self.params)
        raw = self.raw_sum
        out["raw_sum"] = (
            f"{raw.numerator}/{raw.denominator}" if isinstance(raw, Fraction) else raw
        )
        out["envelope"] = self.envelope
        out["ratio"] = self.ratio
        out.update(self.extras)
        return out


def _row(params: dict, raw_sum, envelope: float, **extras) -> RatioRow:
    envelope = float(envelope)
    if envelope <= 0:
        raise PreconditionError(f"envelope must be positive, got {envelope}")
    return RatioRow(params, raw_sum, envelope, float(abs(raw_sum) / envelope), extras)


@dataclass(frozen=True)
class QuartileReport:
    """Non-explosion verdict for a scaling table.

    Rows are collapsed to one ratio per size (the max), sizes sorted
    ascending; passed means max over the top quartile of sizes is at
    most threshold times the max over the middle quartile
    (indices [3n/8, 5n/8)).
    """

    passed: bool
    n_sizes: int
    top_max: float
    middle_max: float
    factor: float
    threshold: float


def quartile_rule(sized_ratios, threshold: float = 2.0) -> QuartileReport:
    """Bounded-ratio criterion over (size, ratio) pairs; needs >= 8 sizes."""
    by_size: dict = {}
    for size, ratio in sized_ratios:
        ratio = float(ratio)
        if size in by_size:
            by_size[size] = max(by_size[size], ratio)
        else:
            by_size[size] = ratio
    n = len(by_size)
    if n < 8:
        raise PreconditionError(f"quartile_rule needs >= 8 distinct sizes, got {n}")
    vals = [by_size[s] for s in sorted(by_size)]
    top_max = max(vals[(3 * n) // 4:])
    mid = vals[(3 * n) // 8: max((3 * n) // 8 + 1, (5 * n) // 8)]
    middle_max = max(mid)
    if middle_max > 0:
        factor = top_max / middle_max
        passed = top_max <= threshold * middle_max
    else:
        factor = math.inf if top_max > 0 else 0.0
        passed = top_max == 0
    return QuartileReport(passed, n, top_max, middle_max, factor, threshold)


# ---------------------------------------------------------------------------
# Brun-Titchmarsh scan


@dataclass(frozen=True)
class BTViolation:
    """One residue class exceeding the Brun-Titchmarsh envelope."""

    q: int
    a: int
    count: int
    bound: float


def bt_check(
    x: int, qmax: int, table: arith.PrimeTable | None = None
) -> list[BTViolation]:
    """Scan pi(x; q, a) <= 2x / (phi(q) * ln(x/q)) for every q <= qmax.

    All residues a with gcd(a, q) = 1 are checked; classes sharing a
    factor with q hold at most one prime and sit outside the
    totient-form statement, so they are skipped.  qmax < x keeps
    ln(x/q) positive, hence the bound well-defined.  Returns the
    violations (expected: none).
    """
    if qmax < 2:
        raise PreconditionError(f"qmax must be >= 2, got {qmax}")
    if qmax >= x:
        raise PreconditionError(f"need qmax < x, got qmax={qmax}, x={x}")
    if table is None:
        table = arith.shared_table(x)
    primes = table.primes_leq(x)
    phis = arith.phi_table(qmax)
    violations: list[BTViolation] = []
    for q in range(1, qmax + 1):
        bound = 2.0 * x / (int(phis[q]) * math.log(x / q))
        counts = np.bincount(primes % q, minlength=q)
        coprime = np.gcd(np.arange(q, dtype=np.int64), q) == 1
        for a in np.flatnonzero(coprime & (counts > bound)):
            violations.append(BTViolation(q, int(a), int(counts[a]), bound))
    return violations


# ---------------------------------------------------------------------------
# divisor sums tau(k * a * b^2 + 1)

_tau_tables_cache: dict[int, tuple] = {}


def _tau_tables(nmax: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(primes, sq_flat, sq_off) covering primes up to nmax^(1/3)."""
    lim = int(round(nmax ** (1 / 3))) + 2
    bucket = 1 << max(6, (lim - 1).bit_length())
    if bucket not in _tau_tables_cache:
        primes = arith.sieve_primes(bucket)
        flat, off = sqrt_tables(primes)
        _tau_tables_cache[bucket] = (primes, flat, off)
    return _tau_tables_cache[bucket]


def tau_sum(A: int, B: int, k: int = 1) -> int:
    """Exact sum of tau(k*a*b^2 + 1) over 1 <= a <= A, 1 <= b <= B.

    Row-sieved: for each a the values k*a*b^2+1 get all prime factors
    q <= (row max)^(1/3) divided out along root progressions; the
    leftover cofactor is 1, a prime, a prime square, or a product of
    two distinct primes, classified by one square test and one
    primality test.
    """
    if A < 1 or B < 1 or k < 1:
        raise PreconditionError(f"need A, B, k >= 1, got {A}, {B}, {k}")
    if k * A * 4 * B * B > TAU_SUM_CAP:
        raise CapacityError(
            f"tau_sum capacity k*A*(2B)^2 = {k * A * 4 * B * B} exceeds {TAU_SUM_CAP}"
        )
    primes, sq_flat, sq_off = _tau_tables(k * A * B * B + 1)
    rem = np.empty(B + 1, dtype=np.int64)
    tau_part = np.empty(B + 1, dtype=np.int64)
    total = 0
    for a in range(1, A + 1):
        c0 = k * a
        tau_row(c0, B, c0 * B * B + 1, primes, sq_flat, sq_off, rem, tau_part)
        vals = rem[1:]
        mult = tau_part[1:]
        for i in np.flatnonzero(vals > 1):
            v = int(vals[i])
            r = math.isqrt(v)
            if r * r == v:
                mult[i] *= 3
            elif gmpy2.is_prime(v):
                mult[i] *= 2
            else:
                mult[i] *= 4
        total += int(mult.sum())
    return total


def tau_sum_ratio(A: int, B: int, k: int = 1) -> RatioRow:
    """tau_sum against the A*B*log2(A+B) envelope (valid regime k <= A).

    extras carry the k-aware envelope A*B*log2(A+B)*log2(1+k) and its
    ratio as prop_envelope / prop_ratio.
    """
    if k > A:
        raise PreconditionError(f"envelope regime needs k <= A, got k={k}, A={A}")
    s = tau_sum(A, B, k)
    envelope = A * B * math.log2(A + B)
    prop_env = envelope * math.log2(1 + k)
    return _row(
        {"A": A, "B": B, "k": k},
        s,
        envelope,
        prop_envelope=prop_env,
        prop_ratio=s / prop_env,
    )


def tau_grid(exps=range(4, 11)) -> list[RatioRow]:
    """The tau_sum scaling table: A, B over powers of two, k in {1, A/2, A}."""
    rows = []
    for ea in exps:
        A = 1 << ea
        for eb in exps:
            B = 1 << eb
            for k in (1, A // 2, A):
                rows.append(tau_sum_ratio(A, B, k))
    return rows


# ---------------------------------------------------------------------------
# character sums


def char_sum(q: int, N: int, H: int) -> int:
    """Sum of Jacobi symbols (n/q) for n = N .. N+H inclusive."""
    if q < 3 or q % 2 == 0:
        raise PreconditionError(f"need odd q >= 3, got {q}")
    if N < 1 or H < 1:
        raise PreconditionError(f"need N, H >= 1, got N={N}, H={H}")
    return sum(arith.jacobi(n, q) for n in range(N, N + H + 1))


def burgess_ratio(
    q: int, N: int, H: int, r: int = 2, eps: float = 0.01
) -> RatioRow:
    """|char_sum| against the H^(1-1/(r+1)) * q^(1/(4r)+eps) envelope.

    The envelope's validity regime is squarefree q, or arbitrary q when
    r = 2; other combinations are refused.  extras include the weaker
    sqrt(q)*log2(q) envelope for reference.
    """
    if r < 1:
        raise PreconditionError(f"need r >= 1, got {r}")
    if eps <= 0:
        raise PreconditionError(f"need eps > 0, got {eps}")
    if r != 2 and any(e > 1 for _, e in arith.factorize(q)):
        raise PreconditionError(f"q={q} not squarefree requires r=2, got r={r}")
    s = char_sum(q, N, H)
    envelope = H ** (1 - 1 / (r + 1)) * q ** (1 / (4 * r) + eps)
    return _row(
        {"q": q, "N": N, "H": H, "r": r, "eps": eps},
        s,
        envelope,
        pv_envelope=math.sqrt(q) * math.log2(q),
    )


def _squarefree_odd_near(target: int) -> int:
    n = target | 1
    while any(e > 1 for _, e in arith.factorize(n)):
        n += 2
    return n


def burgess_grid(
    qmax: int = 100_000, r: int = 2, eps: float = 0.01
) -> list[RatioRow]:
    """Sampled squarefree odd moduli up to qmax, windows H from sqrt(q) to q.

    Moduli are log-spaced (about three per decade), each bumped to the
    next odd squarefree integer; every modulus gets windows starting at
    N = 1 of length q^(1/2), q^(3/4), and q.
    """
    if qmax < 100:
        raise PreconditionError(f"need qmax >= 100, got {qmax}")
    qs = sorted(
        {
            _squarefree_odd_near(round(100 * (qmax / 100) ** (i / 12)))
            for i in range(13)
        }
    )
    rows = []
    for q in qs:
        for H in (math.isqrt(q), math.isqrt(math.isqrt(q) ** 3), q):
            rows.append(burgess_ratio(q, 1, max(H, 1), r=r, eps=eps))
    return rows


def weighted_jacobi_sum(A: int, B: int, k: int = 1) -> RatioRow:
    """The doubly-weighted Jacobi sum against its A*log2(B) envelope.

    raw_sum = sum over odd q <= B with gcd(q, 2k) = 1 of
    log2(B/q)/q * sum over a <= A with gcd(a, 2q) = 1 of (-k*a / q).
    Exact symbol arithmetic; only the weights are floats (fsum-reduced
    in ascending q order, so the value is scheduling-independent).
    """
    if A < 2 or B < 2:
        raise PreconditionError(f"need A, B >= 2, got A={A}, B={B}")
    if k < 1:
        raise PreconditionError(f"need k >= 1, got {k}")
    terms = []
    for q in range(1, B + 1, 2):
        if math.gcd(q, 2 * k) != 1:
            continue
        inner = 0
        for a in range(1, A + 1, 2):
            if math.gcd(a, q) == 1:
                inner += arith.jacobi(-k * a, q)
        if inner:
            terms.append(math.log2(B / q) / q * inner)
    raw = math.fsum(terms)
    return _row({"A": A, "B": B, "k": k}, raw, A * math.log2(B))


# ---------------------------------------------------------------------------
# the tuple count T(x) and its pi(x; q, a) majorant


@dataclass(frozen=True)
class TCountResult:
    """Exact tuple count, its exact progression-count majorant, and the
    totient-shaped envelope the next proof stage replaces it with."""

    x: int
    tuples: int
    tupr_rhs: int
    phi_envelope: float


def _pair_splits(j: int) -> int:
    """Number of (u, m) with u*m = j and u <= m."""
    return (arith.tau(j) + 1) // 2


def t_count(x: int, table: arith.PrimeTable | None = None) -> TCountResult:
    """Count tuples (m, p, a, b, c, u) with m*a*b*u = 1 + p*(a+b)/c.

    Constraints: p <= x prime, gcd(a, b) = 1, c | a+b, with the
    normalizations u <= m and a*u*m <= x (b is free: substituting
    b = c*t - a makes it determined, not assumed >= a).

    For fixed q = a*u*m and a | q, writing Q = a*q + 1, each divisor
    t | Q pins p = c*q - Q/t, so tuples correspond to c with p prime
    in [2, x] and gcd(a, c*t - a) = 1; multiplicity over (u, m) splits
    of q/a.  tupr_rhs replaces the c-scan with the exact progression
    count pi(x; q, -(Q/t) mod q) — term-wise an over-count, so
    tuples <= tupr_rhs holds structurally; both sides are still
    computed independently here.  phi_envelope is
    sum of tau(Q) * x / (phi(q) * log2(2 + x/q)) over the same triples.
    """
    if x < 2:
        raise PreconditionError(f"need x >= 2, got {x}")
    if x > T_COUNT_CAP:
        raise CapacityError(f"x={x} beyond t_count cap {T_COUNT_CAP}")
    if table is None:
        table = arith.shared_table(x)
    phis = arith.phi_table(x)
    tuples = 0
    rhs = 0
    env_terms = []
    for q in range(1, x + 1):
        wq = 0
        for a in arith.divisors(q):
            mult = _pair_splits(q // a)
            Q = a * q + 1
            wq += arith.tau(Q) * mult
            for t in arith.divisors(Q):
                Qt = Q // t
                rhs += mult * arith.pi_ap(x, q, (-Qt) % q, table=table)
                c_lo = max(-(-(a + 1) // t), -(-(2 + Qt) // q))
                c_hi = (x + Qt) // q
                for c in range(c_lo, c_hi + 1):
                    if math.gcd(a, c * t - a) != 1:
                        continue
                    if table.contains(c * q - Qt):
                        tuples += mult
        env_terms.append(wq * x / (int(phis[q]) * math.log2(2 + x / q)))
    return TCountResult(x, tuples, rhs, math.fsum(env_terms))


def type2_size_sum(x: int) -> int:
    """Sum over primes p <= x of the number of Type II values m."""
    return sum(len(types.type2_values(int(p))) for p in arith.sieve_primes(x))


# ---------------------------------------------------------------------------
# dyadic decomposition of the divisor-sum envelope


@dataclass(frozen=True)
class DyadicCell:
    """A dyadic box [A,2A] x [U,2U] x [M,2M] in (a, u, m) space."""

    a: int
    u: int
    m: int

    def __post_init__(self):
        for v in (self.a, self.u, self.m):
            if v < 1 or v & (v - 1):
                raise PreconditionError(f"cell corners must be powers of two: {self}")


def _pow2_check(name: str, v: int) -> int:
    if v < 1 or v & (v - 1):
        raise PreconditionError(f"{name} must be a power of two, got {v}")
    return v.bit_length() - 1


def dyadic_cells(N: int, x: int) -> list[DyadicCell]:
    """All dyadic boxes whose product range [AUM, 8AUM] meets [N/2, N].

    The product over a box with corners (A, U, M) = (2^i, 2^j, 2^h)
    spans [2^s, 2^(s+3)], s = i+j+h, so the box qualifies exactly when
    N/16 <= 2^s <= N; the count is O((log x)^2) for N <= x.
    """
    n = _pow2_check("N", N)
    _pow2_check("x", x)
    if N > x:
        raise PreconditionError(f"need N <= x, got N={N}, x={x}")
    cells = []
    for s in range(max(0, n - 4), n + 1):
        for i in range(s + 1):
            for j in range(s - i + 1):
                cells.append(DyadicCell(1 << i, 1 << j, 1 << (s - i - j)))
    return cells


def _tau_weight(q: int) -> int:
    """Sum of tau(a*q + 1) over a | q, weighted by (u, m) splits of q/a.

    This is the exact numerator of the dyadic band sums: a triple
    (a, u, m) with a*u*m = q contributes tau(a^2*u*m + 1) = tau(a*q+1).
    """
    return sum(
        arith.tau(a * q + 1) * _pair_splits(q // a) for a in arith.divisors(q)
    )


def dyadic_sum(N: int, x: int) -> RatioRow:
    """Exact rational sum of tau(a^2*u*m+1)/(a*u*m) over one dyadic band.

    Triples (a, u, m) with u <= m and N/2 <= a*u*m <= N (closed band,
    matching the displayed sum being checked); envelope (log2 x)^3.
    The sum is assembled over a common denominator lcm(N/2..N) and
    reduced once, which keeps the bignum work linear in the band width.
    """
    n = _pow2_check("N", N)
    _pow2_check("x", x)
    if N > x:
        raise PreconditionError(f"need N <= x, got N={N}, x={x}")
    if x > DYADIC_SUM_CAP:
        raise CapacityError(f"x={x} beyond dyadic_sum cap {DYADIC_SUM_CAP}")
    lo = max(1, N // 2)
    denom = math.lcm(*range(lo, N + 1))
    num = sum(_tau_weight(q) * (denom // q) for q in range(lo, N + 1))
    total = Fraction(num, denom)
    return _row({"N": N, "x": x}, total, math.log2(x) ** 3 if x > 2 else 1.0)


def dyadic_sum_table(x: int = 1 << 14) -> list[RatioRow]:
    """dyadic_sum rows for every band N = 2^i <= x (size key: N)."""
    xe = _pow2_check("x", x)
    return [dyadic_sum(1 << i, x) for i in range(xe + 1)]


def dyadic_cell_table(x: int = 1 << 20) -> list[RatioRow]:
    """Cell counts against (log2 x)^2 for all N = 2^i <= x."""
    xe = _pow2_check("x", x)
    if xe < 2:
        raise PreconditionError("need x >= 4 for a positive envelope")
    return [
        _row({"N": 1 << i, "x": x}, len(dyadic_cells(1 << i, x)), xe * xe)
        for i in range(xe + 1)
    ]


@dataclass(frozen=True)
class PartitionReport:
    """Dyadic bands vs the whole range 1..x, computed independently.

    Bands here are half-open (N/2, N] plus the singleton {1}, so each
    q <= x lands in exactly one band; triples/tau_total are exact
    integer identities, envelope agreement is float (fsum both ways).
    """

    x: int
    ok: bool
    triples_global: int
    triples_banded: int
    tau_global: int
    tau_banded: int
    envelope_global: float
    envelope_banded: float


def dyadic_partition_check(x: int) -> PartitionReport:
    xe = _pow2_check("x", x)
    if x > DYADIC_SUM_CAP:
        raise CapacityError(f"x={x} beyond dyadic cap {DYADIC_SUM_CAP}")
    phis = arith.phi_table(x)

    def envelope_term(q: int, wq: int) -> float:
        return wq * x / (int(phis[q]) * math.log2(2 + x / q))

    # global pass
    triples_g = 0
    tau_g = 0
    env_terms = []
    for q in range(1, x + 1):
        triples_g += sum(_pair_splits(q // a) for a in arith.divisors(q))
        wq = _tau_weight(q)
        tau_g += wq
        env_terms.append(envelope_term(q, wq))
    env_g = math.fsum(env_terms)

    # banded pass: {1}, then (N/2, N] for N = 2, 4, ..., x
    triples_b = 0
    tau_b = 0
    band_terms = []
    for i in range(xe + 1):
        N = 1 << i
        lo = 1 if N == 1 else N // 2 + 1
        for q in range(lo, N + 1):
            triples_b += sum(_pair_splits(q // a) for a in arith.divisors(q))
            wq = _tau_weight(q)
            tau_b += wq
            band_terms.append(envelope_term(q, wq))
    env_b = math.fsum(band_terms)

    ok = (
        triples_g == triples_b
        and tau_g == tau_b
        and math.isclose(env_g, env_b, rel_tol=1e-9)
    )
    return PartitionReport(x, ok, triples_g, triples_b, tau_g, tau_b, env_g, env_b)


# ---------------------------------------------------------------------------
# the tail sum


def tail_sum(x: int) -> RatioRow:
    """S(L) = sum over i = 1..L of log2(i)/(1 + L - i), L = floor(log2 x).

    Envelope (log2 L)^2.  Work is O(L), so no capacity cap applies;
    the table in the scaling check runs L up to 64.
    """
    if x < 4:
        raise PreconditionError(f"need x >= 4, got {x}")
    L = x.bit_length() - 1
    s = math.fsum(math.log2(i) / (1 + L - i) for i in range(1, L + 1))
    return _row({"x": x, "L": L}, s, math.log2(L) ** 2 if L > 2 else 1.0)


def tail_table(lmax: int = 64) -> list[RatioRow]:
    """tail_sum rows for L = 3..lmax (size key: L)."""
    if lmax < 10:
        raise PreconditionError(f"need lmax >= 10, got {lmax}")
    return [tail_sum(1 << L) for L in range(3, lmax + 1)]
