"""Small integer arithmetic helpers: sieves, factoring, residue symbols."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt


def primes_up_to(n: int) -> list:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def smallest_prime_factors(n: int) -> list:
    spf = list(range(n + 1))
    for p in range(2, isqrt(n) + 1):
        if spf[p] == p:
            for k in range(p * p, n + 1, p):
                if spf[k] == k:
                    spf[k] = p
    return spf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict:
    n = abs(n)
    out: dict = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def lcm(*xs) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


def mobius(n: int) -> int:
    f = factorize(n)
    if any(k > 1 for k in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def totient(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def primitive_root(p: int) -> int:
    """Smallest generator of (Z/p)^x for an odd prime p (1 for p = 2)."""
    if p == 2:
        return 1
    qs = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ValueError(f"{p} is not prime")


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs an odd positive modulus")
    a %= n
    out = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                out = -out
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            out = -out
        a %= n
    return out if n == 1 else 0


def hensel_level(p: int, m: int) -> int:
    """k such that a p-adic unit is an m-th power iff it is one mod p^k."""
    v = valuation(m, p) if m % p == 0 else 0
    if p == 2:
        return v + 2 if v else 1
    return v + 1


def is_padic_power(x: Fraction, p: int, m: int) -> bool:
    """Whether the nonzero rational x is an m-th power in Q_p."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero")
    vnum = valuation(x.numerator, p) if x.numerator % p == 0 else 0
    vden = valuation(x.denominator, p) if x.denominator % p == 0 else 0
    if (vnum - vden) % m:
        return False
    unit = x * Fraction(p) ** (vden - vnum)
    k = hensel_level(p, m)
    mod = p**k
    u = unit.numerator * pow(unit.denominator, -1, mod) % mod
    return any(pow(y, m, mod) == u for y in range(1, mod) if y % p)


def hom_count_padic_units(p: int, m: int) -> int:
    """#Hom(Z_p^x, Z/m)."""
    if p == 2:
        return gcd(2, m) * 2 ** (valuation(m, 2) if m % 2 == 0 else 0)
    return gcd(p - 1, m) * p ** (valuation(m, p) if m % p == 0 else 0)
