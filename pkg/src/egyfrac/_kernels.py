"""Hot loops, compiled with numba when available.

Three sweeps dominate runtime — the per-numerator representability scan
(oracle_mask), the Type I / Type II witness scans (type1_mask,
type2_mask), and the tau(c*b^2+1) row sieve (tau_row).  They are written
as module-level functions over numpy arrays and compiled with njit when
numba imports; without numba the same source runs uncompiled, giving
identical results, just slowly.

Everything sticks to int64.  Callers enforce the caps that keep every
intermediate in range:

    oracle_mask   p <= 31000    (largest intermediate s^2 <= 9p^4 < 2^63)
    type1_mask    p <= 2^17
    type2_mask    p <= 2^17     (largest intermediate c*t <= 64p^3 < 2^63)
    tau_row       c*B^2 + 1 <= 2^42
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


#: Largest p for which oracle_mask's intermediates fit in int64.
ORACLE_KERNEL_CAP = 31000
#: Largest p for the type scans (int64 safety, see module docstring).
TYPE_KERNEL_CAP = 1 << 17
#: Divisor buffer size; max tau(s^2) for s <= 3*31000^2 is ~1.1e5.
DIVBUF_LEN = 1 << 17


def spf_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (int32, spf[1] = 1)."""
    spf = np.zeros(limit + 1, dtype=np.int32)
    if limit >= 1:
        spf[1] = 1
    i = 2
    while i * i <= limit:
        if spf[i] == 0:
            seg = spf[i * i :: i]
            seg[seg == 0] = i
        i += 1
    rest = np.flatnonzero(spf[2:] == 0) + 2
    spf[rest] = rest
    return spf


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _modpow(base, exp, mod):
    result = 1
    base %= mod
    while exp > 0:
        if exp & 1:
            result = result * base % mod
        base = base * base % mod
        exp >>= 1
    return result


@njit(cache=True)
def oracle_mask(p, spf, divbuf):
    """mask[m] = 1 iff m/p is a sum of three unit fractions, m <= 3p.

    Per m the scan runs over the first denominator m1 and asks whether
    the remainder (m*m1-p)/(p*m1), reduced to r/s, splits into two unit
    fractions — equivalently whether s^2 has a divisor d = -s (mod r).
    Two passes: a cheap one testing d in {1, 2} and r <= 2, then a full
    divisor-of-s^2 scan for the survivors.  s divides p*m1, so stripping
    p leaves a cofactor <= 3p that the spf table factors.

    spf must cover 3p; divbuf is int64 scratch of DIVBUF_LEN.
    """
    three_p = 3 * p
    mask = np.zeros(three_p + 1, dtype=np.uint8)
    pr = np.zeros(24, dtype=np.int64)
    ex = np.zeros(24, dtype=np.int64)
    for m in range(1, three_p + 1):
        if m % p == 0:
            # m/p integer in {1,2,3}; all three split (e.g. 1 = 1/2+1/3+1/6).
            mask[m] = 1
            continue
        lo = p // m + 1
        hi = three_p // m
        found = False
        for m1 in range(lo, hi + 1):
            r0 = m * m1 - p
            s0 = p * m1
            g = _gcd(r0, s0)
            r = r0 // g
            if r <= 2:
                found = True
                break
            s = s0 // g
            if (s + 1) % r == 0:
                found = True
                break
            if (s & 1) == 0 and (s + 2) % r == 0:
                found = True
                break
        if not found:
            for m1 in range(lo, hi + 1):
                r0 = m * m1 - p
                s0 = p * m1
                g = _gcd(r0, s0)
                r = r0 // g
                s = s0 // g
                # factor s = p^e * (cofactor dividing m1 <= 3p)
                nf = 0
                ss = s
                e = 0
                while ss % p == 0:
                    ss //= p
                    e += 1
                if e > 0:
                    pr[nf] = p
                    ex[nf] = e
                    nf += 1
                while ss > 1:
                    q = spf[ss]
                    e = 0
                    while ss % q == 0:
                        ss //= q
                        e += 1
                    pr[nf] = q
                    ex[nf] = e
                    nf += 1
                total = 1
                for i in range(nf):
                    total *= 2 * ex[i] + 1
                if total > divbuf.shape[0]:
                    raise ValueError("divisor buffer overflow")
                nd = 1
                divbuf[0] = 1
                for i in range(nf):
                    q = pr[i]
                    old = nd
                    pw = 1
                    for _ in range(2 * ex[i]):
                        pw *= q
                        for j in range(old):
                            divbuf[nd] = divbuf[j] * pw
                            nd += 1
                target = (-s) % r
                for j in range(nd):
                    if divbuf[j] % r == target:
                        found = True
                        break
                if found:
                    break
        if found:
            mask[m] = 1
    return mask


@njit(cache=True)
def type1_mask(p):
    """mask[m] = 1 for every Type I value m of the prime p.

    Scans coprime pairs a <= b with (a-1)(b-1) <= p+1 (the a = 1 column
    up to b = p+1, which is set-complete: b > p+1 forces u*m = 1, i.e.
    m = 1, already hit at b = 1).  Instead of factoring a+b per pair,
    the middle loop runs over t and steps b through the progression
    b = -a (mod t); then c = (a+b)/t and m ranges over the divisors of
    (p+t)/(ab) whenever ab divides p+t.
    """
    three_p = 3 * p
    mask = np.zeros(three_p + 1, dtype=np.uint8)
    cop = np.ones(p + 3, dtype=np.uint8)
    a = 1
    while (a - 1) * (a - 1) <= p + 1:
        if a == 1:
            bmax = p + 1
        else:
            bmax = (p + 1) // (a - 1) + 1
        if bmax < a:
            break
        # sieve out b sharing a factor with a
        for b in range(1, bmax + 1):
            cop[b] = 1
        aa = a
        q = 2
        while q * q <= aa:
            if aa % q == 0:
                while aa % q == 0:
                    aa //= q
                for b in range(q, bmax + 1, q):
                    cop[b] = 0
            q += 1
        if aa > 1:
            for b in range(aa, bmax + 1, aa):
                cop[b] = 0
        for t in range(1, a + bmax + 1):
            N = p + t
            # smallest b >= a with a + b = 0 (mod t)
            b0 = a + ((-2 * a) % t)
            for b in range(b0, bmax + 1, t):
                if cop[b] == 0:
                    continue
                ab = a * b
                if N % ab == 0:
                    M = N // ab
                    d = 1
                    while d * d <= M:
                        if M % d == 0:
                            if d <= three_p:
                                mask[d] = 1
                            d2 = M // d
                            if d2 <= three_p:
                                mask[d2] = 1
                        d += 1
        a += 1
    return mask


@njit(cache=True)
def type2_mask(p):
    """mask[m] = 1 for every Type II value m of the prime p.

    Parametrized by (a, c, k) with k = u*m: the witness equation
    m*a*b*u = 1 + p*t with b = c*t - a pins t = (1 + k*a^2)/(k*a*c - p)
    whenever the division is exact.  Witnesses with a <= b all satisfy
    a*c*k <= 4p, so the triple scan below is set-complete; b < a hits
    are skipped (their mirror image lands in range), and t >= 1 gives
    the extra cut k*a*(c-a) <= p+1 when c > a.  Each hit contributes
    every divisor m of k (u = k/m).
    """
    three_p = 3 * p
    four_p = 4 * p
    mask = np.zeros(three_p + 1, dtype=np.uint8)
    for a in range(1, four_p + 1):
        cmax = four_p // a
        if cmax == 0:
            break
        for c in range(1, cmax + 1):
            ac = a * c
            k0 = p // ac + 1
            kmax = four_p // ac
            if c > a:
                kcut = (p + 1) // (a * (c - a))
                if kcut < kmax:
                    kmax = kcut
            aa = a * a
            for k in range(k0, kmax + 1):
                den = k * ac - p
                num = 1 + k * aa
                if num % den:
                    continue
                t = num // den
                b = c * t - a
                if b < a:
                    continue
                if _gcd(a, b) != 1:
                    continue
                d = 1
                while d * d <= k:
                    if k % d == 0:
                        if d <= three_p:
                            mask[d] = 1
                        d2 = k // d
                        if d2 <= three_p:
                            mask[d2] = 1
                    d += 1
    return mask


@njit(cache=True)
def tau_row(c0, B, nmax, primes, sq_flat, sq_off, rem, tau):
    """Fill tau[b] with the sieved part of tau(c0*b^2+1) for b = 1..B.

    primes must hold all primes q <= nmax^(1/3) (nmax >= c0*B^2+1), with
    per-prime square-root tables packed in sq_flat/sq_off (sq gives, for
    each residue, one square root mod q or -1).  Roots of c0*b^2 = -1
    (mod q) seed progressions whose terms get q divided out of rem[b].
    On return rem[b] carries the unsieved cofactor: 1, or a product of
    at most two primes > nmax^(1/3), which the caller classifies.
    """
    for b in range(1, B + 1):
        rem[b] = c0 * b * b + 1
        tau[b] = 1
    for ip in range(primes.shape[0]):
        q = primes[ip]
        if q * q * q > nmax:
            break
        c = c0 % q
        if c == 0:
            continue  # c0*b^2+1 = 1 (mod q), never divisible
        tgt = (q - _modpow(c, q - 2, q)) % q  # -1/c mod q
        root = sq_flat[sq_off[ip] + tgt]
        if root < 0:
            continue
        for b in range(root, B + 1, q):
            e = 0
            while rem[b] % q == 0:
                rem[b] //= q
                e += 1
            tau[b] *= e + 1
        r2 = q - root
        if r2 != root:
            for b in range(r2, B + 1, q):
                e = 0
                while rem[b] % q == 0:
                    rem[b] //= q
                    e += 1
                tau[b] *= e + 1
    return


def sqrt_tables(primes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Packed square-root lookup tables for a list of primes.

    For prime q at index i, sq_flat[sq_off[i] + t] is a root of
    x^2 = t (mod q), or -1 when t is a non-residue.
    """
    sizes = primes.astype(np.int64)
    off = np.zeros(len(primes) + 1, dtype=np.int64)
    np.cumsum(sizes, out=off[1:])
    flat = np.full(int(off[-1]), -1, dtype=np.int32)
    for i, q in enumerate(primes):
        q = int(q)
        r = np.arange(q, dtype=np.int64)
        # assign in descending r so the smallest root wins
        flat[int(off[i]) + (r[::-1] * r[::-1]) % q] = r[::-1]
    return flat, off[:-1]
