from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from artifact.arith import (
    factorize,
    hensel_level,
    hom_count_padic_units,
    is_padic_power,
    is_prime,
    jacobi,
    lcm,
    mobius,
    primes_up_to,
    primitive_root,
    smallest_prime_factors,
    totient,
)
from artifact.galois_core import FiniteGroup, homomorphisms


def test_sieve_matches_trial_division():
    assert primes_up_to(200) == [n for n in range(200 + 1) if is_prime(n)]
    spf = smallest_prime_factors(500)
    for n in range(2, 501):
        assert spf[n] == min(factorize(n))


@given(st.integers(min_value=1, max_value=10**6))
def test_factorize_roundtrip(n):
    out = 1
    for p, k in factorize(n).items():
        assert is_prime(p)
        out *= p**k
    assert out == n


@given(st.integers(min_value=1, max_value=3000))
def test_totient_and_mobius(n):
    assert totient(n) == sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)
    if n > 1:
        assert sum(mobius(d) for d in range(1, n + 1) if n % d == 0) == 0


def test_lcm():
    assert lcm(4, 6, 10) == 60
    assert lcm() == 1


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 101])
def test_primitive_root_generates(p):
    g = primitive_root(p)
    assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1
    assert all(len({pow(a, k, p) for k in range(p - 1)}) < p - 1 for a in range(2, g))


@given(st.integers(min_value=-200, max_value=200), st.integers(min_value=0, max_value=60))
def test_jacobi_matches_euler_criterion(a, k):
    p = primes_up_to(300)[1:][k]
    euler = pow(a % p, (p - 1) // 2, p)
    assert jacobi(a, p) == (0 if a % p == 0 else (1 if euler == 1 else -1))


@pytest.mark.parametrize("p,m", [(2, 2), (2, 4), (3, 3), (3, 9), (5, 5), (3, 2), (5, 2), (7, 3)])
def test_padic_power_against_deep_congruence(p, m):
    # oracle: x is an m-th power in Z_p^x iff it is one mod p^N for large N
    N = hensel_level(p, m) + 3
    mod = p**N
    powers = {pow(y, m, mod) for y in range(1, mod) if y % p}
    for x in range(1, 200):
        if x % p == 0:
            continue
        assert is_padic_power(Fraction(x), p, m) == (x % mod in powers)


def test_padic_power_valuation_and_fractions():
    assert is_padic_power(Fraction(4), 2, 2)
    assert not is_padic_power(Fraction(2), 2, 2)
    assert is_padic_power(Fraction(1, 9), 3, 2)
    assert is_padic_power(Fraction(-7), 2, 2)  # -7 = 1 mod 8
    assert not is_padic_power(Fraction(-1), 2, 2)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (2, 8), (3, 2), (3, 3), (3, 6), (5, 2), (5, 4), (7, 3), (7, 6)])
def test_hom_count_matches_finite_units(p, m):
    k = hensel_level(p, m) if m % p == 0 else 1
    units = FiniteGroup.units_mod(p ** (k + 1))
    assert hom_count_padic_units(p, m) == len(homomorphisms(units, FiniteGroup.cyclic(m)))
