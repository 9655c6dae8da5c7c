import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import brute
from egyfrac import arith
from egyfrac.errors import CapacityError, DomainError


# ---------------------------------------------------------------------------
# sieve and prime table


def test_sieve_small():
    assert list(arith.sieve_primes(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert list(arith.sieve_primes(0)) == []
    assert list(arith.sieve_primes(1)) == []
    assert list(arith.sieve_primes(2)) == [2]


def test_sieve_vs_plain_eratosthenes():
    assert np.array_equal(arith.sieve_primes(10**5), np.array(brute.primes_upto(10**5)))


def test_sieve_million_count():
    assert len(arith.sieve_primes(10**6)) == 78498  # pi(10^6)


def test_sieve_capacity():
    with pytest.raises(CapacityError):
        arith.sieve_primes((1 << 32) + 1)


def test_prime_table():
    t = arith.PrimeTable.build(100)
    ps = brute.primes_upto(100)
    for n in range(101):
        assert t.count_leq(n) == sum(1 for p in ps if p <= n)
        assert t.contains(n) == (n in set(ps))
    assert list(t.primes_leq(50)) == [p for p in ps if p <= 50]


def test_shared_table_caches():
    a = arith.shared_table(1000)
    b = arith.shared_table(900)
    assert b.count_leq(900) == len(brute.primes_upto(900))
    assert a.count_leq(1000) == 168


# ---------------------------------------------------------------------------
# primality and factorization


def test_is_prime_edges():
    assert not arith.is_prime(0)
    assert not arith.is_prime(1)
    assert not arith.is_prime(-7)
    assert arith.is_prime(2)
    assert arith.is_prime(3)
    assert arith.is_prime(2**31 - 1)
    assert not arith.is_prime(561)  # Carmichael
    assert arith.is_prime(2**61 - 1)


def test_is_prime_carmichael_and_semiprimes():
    for n in (561, 1105, 1729, 2465, 41041, 825265):
        assert not arith.is_prime(n)
    m = (2**31 - 1) * (2**31 + 11)
    assert not arith.is_prime(m)


def test_is_prime_vs_sieve():
    primeset = set(brute.primes_upto(10**5))
    for n in range(10**5 + 1):
        assert arith.is_prime(n) == (n in primeset), n


@given(st.integers(min_value=2, max_value=10**12))
def test_factorize_reconstructs(n):
    fac = arith.factorize(n)
    prod = 1
    for p, e in fac:
        assert e >= 1
        assert arith.is_prime(p)
        prod *= p**e
    assert prod == n
    assert [p for p, _ in fac] == sorted(p for p, _ in fac)


def test_divisors():
    assert arith.divisors(1) == [1]
    assert arith.divisors(12) == [1, 2, 3, 4, 6, 12]
    assert arith.divisors(997) == [1, 997]


# ---------------------------------------------------------------------------
# tau, phi


def test_tau_examples():
    assert arith.tau(1) == 1
    assert arith.tau(12) == 6
    assert arith.tau(997) == 2  # prime


def test_tau_table_2000():
    tt = brute.tau_table(2000)
    for n in range(1, 2001):
        assert arith.tau(n) == tt[n]


def test_phi_examples():
    assert arith.phi(1) == 1
    assert arith.phi(9) == 6
    assert arith.phi(997) == 996  # prime


def test_phi_sampled():
    for n in list(range(1, 200)) + [720, 1024, 5040, 9973, 65536, 99991]:
        assert arith.phi(n) == brute.phi_slow(n)


def test_phi_table_matches_phi():
    pt = arith.phi_table(3000)
    for n in range(1, 3001):
        assert int(pt[n]) == arith.phi(n)


# ---------------------------------------------------------------------------
# jacobi


def test_jacobi_examples():
    assert arith.jacobi(1, 9) == 1
    assert arith.jacobi(6, 9) == 0
    assert arith.jacobi(2, 15) == 1
    assert arith.jacobi(5, 1) == 1


def test_jacobi_rejects_bad_modulus():
    for q in (0, -3, 2, 10):
        with pytest.raises(DomainError):
            arith.jacobi(3, q)


def test_jacobi_vs_euler_criterion():
    for q in range(1, 200, 2):
        for a in range(-5, 2 * q + 3, 7):
            assert arith.jacobi(a, q) == brute.jacobi_slow(a % q, q), (a, q)


@given(
    st.integers(min_value=-(10**6), max_value=10**6),
    st.integers(min_value=-(10**6), max_value=10**6),
    st.integers(min_value=0, max_value=500),
)
def test_jacobi_multiplicative_and_periodic(a, b, qh):
    q = 2 * qh + 1
    assert arith.jacobi(a * b, q) == arith.jacobi(a, q) * arith.jacobi(b, q)
    assert arith.jacobi(a + q, q) == arith.jacobi(a, q)


def test_jacobi_full_period_sums_to_zero():
    for q in range(3, 1000, 2):
        if brute.squarefree_slow(q):
            assert sum(arith.jacobi(a, q) for a in range(1, q + 1)) == 0, q


# ---------------------------------------------------------------------------
# pi_ap


def test_pi_ap_examples():
    assert arith.pi_ap(10, 1, 0) == 4
    assert arith.pi_ap(100, 4, 1) == 11
    assert arith.pi_ap(100, 4, 0) == 0


def test_pi_ap_counts_primes_dividing_q():
    # 2 = 0 (mod 2) is a prime in the non-coprime class
    assert arith.pi_ap(10, 2, 0) == 1
    assert arith.pi_ap(10, 3, 0) == 1


def test_pi_ap_residue_sums():
    x = 10**4
    table = arith.shared_table(x)
    pi_x = len(brute.primes_upto(x))
    for q in range(1, 51):
        total = sum(arith.pi_ap(x, q, a, table=table) for a in range(q))
        assert total == pi_x, q
        coprime = sum(
            arith.pi_ap(x, q, a, table=table)
            for a in range(q)
            if math.gcd(a, q) == 1
        )
        shared = sum(1 for p in brute.primes_upto(x) if q % p == 0)
        assert coprime == pi_x - shared, q


def test_pi_ap_vs_direct_count():
    ps = brute.primes_upto(3000)
    for q, a in [(7, 3), (12, 5), (30, 1), (97, 96), (1, 0)]:
        want = sum(1 for p in ps if p % q == a % q)
        assert arith.pi_ap(3000, q, a) == want
