from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

import brute
from egyfrac import arith, egypt
from egyfrac.egypt import ReducedFraction, UnitTriple
from egyfrac.errors import CapacityError, PreconditionError


# ---------------------------------------------------------------------------
# value types


def test_reduced_fraction_validation():
    assert ReducedFraction(1, 2).as_fraction() == Fraction(1, 2)
    assert ReducedFraction.reduce(2, 4) == ReducedFraction(1, 2)
    assert ReducedFraction.reduce(9, 3) == ReducedFraction(3, 1)
    for num, den in [(2, 4), (0, 1), (1, 0), (-1, 2), (3, -1)]:
        with pytest.raises(PreconditionError):
            ReducedFraction(num, den)


def test_unit_triple_validation():
    t = UnitTriple(2, 3, 6)
    assert t.value() == 1
    for bad in [(3, 2, 5), (1, 5, 4), (0, 1, 1)]:
        with pytest.raises(PreconditionError):
            UnitTriple(*bad)


# ---------------------------------------------------------------------------
# two-term solver


def test_two_term_examples():
    assert egypt.two_term_solutions(ReducedFraction(1, 2)) == [(3, 6), (4, 4)]
    assert egypt.two_term_solutions(ReducedFraction(2, 1)) == [(1, 1)]
    assert egypt.two_term_solutions(ReducedFraction(3, 1)) == []
    assert egypt.two_term_solutions(ReducedFraction(2, 3)) == [(2, 6), (3, 3)]


def test_two_term_dense_vs_brute():
    for s in range(1, 41):
        for r in range(1, 2 * s + 3):
            if gcd(r, s) != 1:
                continue
            got = egypt.two_term_solutions(ReducedFraction(r, s))
            assert got == brute.two_term_slow(r, s), (r, s)


@given(st.integers(min_value=1, max_value=500), st.integers(min_value=1, max_value=200))
def test_two_term_matches_brute(r0, s0):
    f = ReducedFraction.reduce(r0, s0)
    got = egypt.two_term_solutions(f)
    assert got == brute.two_term_slow(f.num, f.den)
    for x, y in got:
        assert x <= y
        assert Fraction(1, x) + Fraction(1, y) == f.as_fraction()


# ---------------------------------------------------------------------------
# three-term oracle and enumeration


def test_three_term_examples():
    assert egypt.three_term_exists(ReducedFraction(4, 5))
    assert egypt.three_term_exists(ReducedFraction(3, 1))
    assert not egypt.three_term_exists(ReducedFraction(7, 2))
    assert egypt.three_term_exists(ReducedFraction(1, 1))


def test_enumerate_examples():
    assert egypt.three_term_enumerate(ReducedFraction(3, 1)) == [UnitTriple(1, 1, 1)]
    assert egypt.three_term_enumerate(ReducedFraction(1, 1)) == [
        UnitTriple(2, 3, 6),
        UnitTriple(2, 4, 4),
        UnitTriple(3, 3, 3),
    ]
    got = egypt.three_term_enumerate(ReducedFraction(4, 5), cap=1)
    assert len(got) == 1
    assert got[0].value() == Fraction(4, 5)
    assert UnitTriple(2, 4, 20) in egypt.three_term_enumerate(ReducedFraction(4, 5))


def test_enumerate_is_sorted_exact_and_complete():
    for n in range(1, 21):
        for m in range(1, 3 * n + 1):
            if gcd(m, n) != 1:
                continue
            f = ReducedFraction(m, n)
            out = egypt.three_term_enumerate(f)
            assert out == sorted(out)
            assert len(out) == len(set(out))
            for t in out:
                assert t.value() == f.as_fraction()
            assert egypt.three_term_exists(f) == bool(out)
            assert bool(out) == brute.three_term_slow(m, n)


@given(
    st.integers(min_value=1, max_value=80),
    st.integers(min_value=1, max_value=80),
    st.integers(min_value=1, max_value=80),
)
def test_any_triple_value_is_representable(a, b, c):
    m1, m2, m3 = sorted((a, b, c))
    v = UnitTriple(m1, m2, m3).value()
    f = ReducedFraction(v.numerator, v.denominator)
    assert egypt.three_term_exists(f)
    assert UnitTriple(m1, m2, m3) in egypt.three_term_enumerate(f)


def test_two_term_reps_extend_to_three():
    # 1/y = 1/(y+1) + 1/(y(y+1)) turns any two-term split into a
    # three-term one, an easy positive-case generator
    for s in range(2, 60):
        for r in range(1, 2 * s + 1):
            if gcd(r, s) != 1:
                continue
            for x, y in egypt.two_term_solutions(ReducedFraction(r, s)):
                assert egypt.three_term_exists(ReducedFraction(r, s))
                assert UnitTriple(*sorted((x, y + 1, y * (y + 1)))).value() == Fraction(r, s)
                break


# ---------------------------------------------------------------------------
# A3(p)


def test_a3_small_values():
    res = egypt.a3_exact(2)
    assert res.value == 6
    assert res.members == (1, 2, 3, 4, 5, 6)
    assert egypt.a3_exact(3).value == 8
    res5 = egypt.a3_exact(5)
    assert res5.value == 11
    assert res5.members == (1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 15)
    assert egypt.a3_exact(7).value == 13


def test_a3_vs_brute():
    for p in (2, 3, 5, 7, 11, 13):
        value, members = brute.a3_slow(p)
        res = egypt.a3_exact(p)
        assert res.value == value
        assert list(res.members) == members


def test_a3_members_structure():
    for p in (5, 13, 101):
        res = egypt.a3_exact(p)
        ms = res.members
        assert list(ms) == sorted(set(ms))
        assert res.value == len(ms)
        for triv in (1, 2, 3, p, 2 * p, 3 * p):
            assert triv in ms
        assert ms[-1] == 3 * p


def test_a3_kernel_agrees_with_pure_oracle():
    # the compiled mask and the plain-Python predicate must tell the
    # same story numerator by numerator
    for p in (101, 499):
        members = set(egypt.a3_exact(p).members)
        for m in range(1, 3 * p + 1):
            if m % p == 0:
                continue
            got = egypt.three_term_exists(ReducedFraction(m, p))
            assert got == (m in members), (p, m)


def test_a3_distinct_mode():
    assert egypt.a3_exact(2, distinct=True).members == (1, 2, 3)
    res = egypt.a3_exact(5, distinct=True)
    assert res.value == 8
    assert res.members == (1, 2, 3, 4, 5, 6, 7, 8)
    # distinct is a subset of repeats-allowed
    assert set(res.members) <= set(egypt.a3_exact(5).members)


def test_a3_errors():
    with pytest.raises(PreconditionError):
        egypt.a3_exact(4)
    with pytest.raises(PreconditionError):
        egypt.a3_exact(1)
    p = egypt.A3_EXACT_CAP + 1
    while not arith.is_prime(p):
        p += 1
    with pytest.raises(CapacityError):
        egypt.a3_exact(p)
