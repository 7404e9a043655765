"""Class numbers and Hecke traces on level-one cusp forms."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from ..frobenius import a_prime_power


def class_number(D: int) -> int:
    """Number of reduced primitive binary quadratic forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"invalid discriminant {D}")
    n = -D
    h = 0
    a = 1
    while 3 * a * a <= n:
        for b in range(-a + 1, a + 1):
            if (b * b + n) % (4 * a):
                continue
            c = (b * b + n) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


def _unit_half(D: int) -> int:
    return {-3: 3, -4: 2}.get(D, 1)


def hurwitz_weighted(D: int) -> Fraction:
    """Sum over orders containing disc D of h / (|units| / 2)."""
    total = Fraction(0)
    f = 1
    while f * f <= -D:
        if D % (f * f) == 0 and (D // (f * f)) % 4 in (0, 1):
            d = D // (f * f)
            total += Fraction(class_number(d), _unit_half(d))
        f += 1
    return total


def cusp_dimension(k: int) -> int:
    """dim S_k(SL_2(Z)) for even k >= 0."""
    if k % 2 or k < 0:
        raise ValueError("weight must be even and >= 0")
    if k < 12:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12


def hecke_trace_sum(p: int, k: int, use_dimension: bool = True) -> int:
    """Sum of a_p(f) over normalized eigenforms f of weight k and level one.

    With use_dimension the trace formula is skipped when the space is zero.
    """
    if k % 2:
        raise ValueError("weight must be even")
    if k < 4:
        raise ValueError("weight must be >= 4")
    if use_dimension and cusp_dimension(k) == 0:
        return 0
    nu = k - 2
    total = Fraction(0)
    bound = isqrt(4 * p)
    for s in range(-bound, bound + 1):
        if s * s >= 4 * p:
            continue
        total += a_prime_power(s, p, nu) * hurwitz_weighted(s * s - 4 * p)
    value = -total / 2 - Fraction(1 + (-1) ** nu, 2)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral trace at p={p}, k={k}: {value}")
    return int(value)
