"""Short Weierstrass curves y^2 = x^3 + A x + B ordered by naive height.

A seed (A, B) is kept when the curve is nonsingular and the model is
minimal, i.e. no prime p has p^4 | A and p^6 | B.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterator


@dataclass(frozen=True, order=True)
class CurveSeed:
    A: int
    B: int

    def __post_init__(self):
        if disc_quantity(self.A, self.B) == 0:
            raise ValueError(f"singular curve ({self.A}, {self.B})")
        if not is_minimal(self.A, self.B):
            raise ValueError(f"non-minimal model ({self.A}, {self.B})")

    @property
    def height(self) -> int:
        return naive_height(self.A, self.B)


def disc_quantity(A: int, B: int) -> int:
    return 4 * A**3 + 27 * B**2


def naive_height(A: int, B: int) -> int:
    return max(4 * abs(A) ** 3, 27 * B * B)


def icbrt(n: int) -> int:
    """Floor of the real cube root of n >= 0."""
    if n < 0:
        raise ValueError("negative argument")
    x = int(round(n ** (1.0 / 3.0)))
    while x**3 > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def _fourth_power_divisors(g: int) -> Iterator[int]:
    # candidate primes for p^4 | g: prime divisors p with p^4 <= g
    p = 2
    while p**4 <= g:
        if g % p == 0:
            yield p
            while g % p == 0:
                g //= p
        p += 1 if p == 2 else 2


def is_minimal(A: int, B: int) -> bool:
    if A == 0 and B == 0:
        return False
    if A == 0:
        return _no_sixth_power(B)
    if B == 0:
        return _no_fourth_power(A)
    g = gcd(A, B)
    for p in _fourth_power_divisors(g):
        if A % p**4 == 0 and B % p**6 == 0:
            return False
    return True


def _no_fourth_power(A: int) -> bool:
    a = abs(A)
    return not any(a % p**4 == 0 for p in _fourth_power_divisors(a))


def _no_sixth_power(B: int) -> bool:
    b = abs(B)
    for p in _fourth_power_divisors(b):
        if b % p**6 == 0:
            return False
    return True


def height_ranges(X: int) -> tuple[int, int]:
    """Largest |A| and |B| allowed by naive height <= X."""
    if X < 0:
        raise ValueError("height bound must be >= 0")
    a_max = icbrt(X // 4)
    b_max = isqrt(X // 27)
    return a_max, b_max


def _signed(n_abs: int) -> tuple[int, ...]:
    return (0,) if n_abs == 0 else (n_abs, -n_abs)


def enumerate_curves(X: int) -> Iterator[CurveSeed]:
    """All minimal nonsingular seeds with naive height <= X.

    Order: by |A|, then sign of A (positive first), then |B|, then sign of B.
    """
    a_max, b_max = height_ranges(X)
    for a_abs in range(a_max + 1):
        for A in _signed(a_abs):
            for b_abs in range(b_max + 1):
                for B in _signed(b_abs):
                    if disc_quantity(A, B) != 0 and is_minimal(A, B):
                        yield CurveSeed(A, B)


def count_curves(X: int) -> int:
    return sum(1 for _ in enumerate_curves(X))


def _count_progression(lo: int, hi: int, residue: int, modulus: int) -> int:
    """Number of integers in [lo, hi] congruent to residue mod modulus."""
    if hi < lo:
        return 0
    first = lo + ((residue - lo) % modulus)
    if first > hi:
        return 0
    return (hi - first) // modulus + 1


def _count_multiples_in_class(bound: int, residue: int, modulus: int, d: int) -> int:
    # integers n in [-bound, bound] with n = residue mod modulus and d | n,
    # where gcd(d, modulus) = 1
    inv = pow(d, -1, modulus)
    k_res = (residue * inv) % modulus
    return _count_progression(-(bound // d), bound // d, k_res, modulus)


def count_in_class(q: int, a: int, b: int, X: int) -> int:
    """Count minimal nonsingular seeds of height <= X with A = a mod q^4, B = b mod q^6.

    Works by lattice counting with inclusion-exclusion over primes not
    dividing q, so it stays cheap for very large X.  The class itself must
    not be one of the excluded classes at the primes dividing q.
    """
    mA, mB = q**4, q**6
    a %= mA
    b %= mB
    for p in _prime_factors(q):
        if a % p**4 == 0 and b % p**6 == 0:
            return 0
    a_max, b_max = height_ranges(X)
    total = 0
    # larger d only see the pair (0, 0), which lies in an excluded class
    d_max = max(isqrt(isqrt(a_max)), icbrt(isqrt(b_max)), 1)
    for d in range(1, d_max + 1):
        if gcd(d, q) != 1:
            continue
        mu = _mobius(d)
        if mu == 0:
            continue
        na = _count_multiples_in_class(a_max, a, mA, d**4)
        nb = _count_multiples_in_class(b_max, b, mB, d**6)
        total += mu * na * nb
    # singular pairs A = -3t^2, B = 2t^3 with t != 0
    t = 1
    while 3 * t * t <= a_max and 2 * t**3 <= b_max:
        for s in (t, -t):
            A, B = -3 * s * s, 2 * s**3
            if A % mA == a and B % mB == b and is_minimal_away_from(A, B, q):
                total -= 1
        t += 1
    return total


def is_minimal_away_from(A: int, B: int, q: int) -> bool:
    g = gcd(A, B)
    for p in _fourth_power_divisors(g):
        if q % p and A % p**4 == 0 and B % p**6 == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def class_density(q: int) -> float:
    """Limiting share of seeds in one admissible class mod (q^4, q^6)."""
    val = float(q) ** 10
    for p in _prime_factors(q):
        val *= 1.0 - float(p) ** -10
    return 1.0 / val
