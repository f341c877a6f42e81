"""Exact integer arithmetic for the bound formulas.

Everything here returns Python ints (arbitrary precision).  Rational
coefficients are carried as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "binom",
    "binom_sum",
    "is_prime_power",
    "qbinom",
    "qbinom_sum",
    "floor_rational",
    "Fraction",
]


def binom(n: int, k: int) -> int:
    """C(n, k), with the convention C(n, k) = 0 for k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binom: n must be nonnegative, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def binom_sum(n: int, lo: int, hi: int) -> int:
    """Sum of C(n, i) for lo <= i <= hi; out-of-range terms count as 0."""
    if lo > hi:
        raise ValueError(f"binom_sum: lo={lo} > hi={hi}")
    lo = max(lo, 0)
    hi = min(hi, n)
    return sum(math.comb(n, i) for i in range(lo, hi + 1))


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def _check_q(q: int) -> None:
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    if not is_prime_power(q):
        raise ValueError(f"q must be a prime power, got {q}")


def qbinom(n: int, k: int, q: int) -> int:
    """Gaussian binomial coefficient [n choose k]_q.

    Evaluated as the telescoping product; after multiplying in each
    numerator factor the running value is divided by the matching
    denominator factor, and that division must be exact.
    """
    _check_q(q)
    if n < 0:
        raise ValueError(f"qbinom: n must be nonnegative, got {n}")
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    value = 1
    for i in range(k):
        # after step i the running value is [n-k+i+1 choose i+1]_q
        value *= q ** (n - k + i + 1) - 1
        den = q ** (i + 1) - 1
        value, rem = divmod(value, den)
        if rem:
            raise ArithmeticError(
                f"inexact division in qbinom({n}, {k}, {q}) at step {i}"
            )
    return value


def qbinom_sum(n: int, lo: int, hi: int, q: int) -> int:
    """Sum of [n choose i]_q for lo <= i <= hi (zero convention)."""
    _check_q(q)
    if lo > hi:
        raise ValueError(f"qbinom_sum: lo={lo} > hi={hi}")
    return sum(qbinom(n, i, q) for i in range(max(lo, 0), min(hi, n) + 1))


def floor_rational(x: int | Fraction) -> int:
    """Largest integer <= x; exact for ints and Fractions."""
    if isinstance(x, int):
        return x
    return x.numerator // x.denominator
