"""Small exact integer and rational helpers shared across the package."""

from __future__ import annotations

import math
from fractions import Fraction


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division (desk-scale inputs)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorize(n).values())


def is_square_int(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def is_square_fraction(x: Fraction | int) -> bool:
    x = Fraction(x)
    return x >= 0 and is_square_int(x.numerator) and is_square_int(x.denominator)


def sqrt_fraction(x: Fraction | int) -> Fraction:
    """Exact square root of a rational perfect square."""
    x = Fraction(x)
    if not is_square_fraction(x):
        raise ValueError(f"{x} is not a rational square")
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))


def valuation(x: Fraction | int, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0 is undefined (infinite)")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def divisor_count(n: int) -> int:
    n = abs(n)
    out = 1
    for e in factorize(n).values():
        out *= e + 1
    return out


def prime_support(x: Fraction | int) -> list[int]:
    """Primes dividing the numerator or denominator of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no finite support")
    ps = set(factorize(x.numerator)) | set(factorize(x.denominator))
    return sorted(ps)
