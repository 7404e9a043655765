"""Weighted sums of a_{p^nu} over isomorphism classes of genus-one curves over F_p."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd

from ..arith import prime_factors
from ..frobenius import a_prime_power
from ..frobenius import _kernels as K

MODULI_BUDGET = 2000
SUBSETS = ("all", "smooth-only", "supersingular", "ordinary")


def _primitive_root(p: int) -> int:
    qs = prime_factors(p - 1)
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in qs):
        g += 1
    return g


def _count_general(a, p):
    a1, a2, a3, a4, a6 = a
    n = 1
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0:
                n += 1
    return p + 1 - n


def _disc_general(a, p):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return (-b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6) % p


def smooth_classes(p: int) -> list[tuple[int, Fraction]]:
    """(a_p, 1/|Aut|) for the smooth classes over F_p, possibly split into
    pieces whose weights add up to the class weights."""
    if p > MODULI_BUDGET:
        raise ValueError(f"p={p} exceeds the enumeration budget {MODULI_BUDGET}")
    out: list[tuple[int, Fraction]] = []
    if p <= 3:
        # every nonsingular model, weighted by the inverse size of the group of
        # coordinate changes; orbit-stabilizer turns this into 1/|Aut| per class
        w = Fraction(1, (p - 1) * p**3)
        for a in product(range(p), repeat=5):
            if _disc_general(a, p):
                out.append((_count_general(a, p), w))
        return out
    half = Fraction(1, 2)
    for j in range(p):
        if j in (0, 1728 % p):
            continue
        k = j * (1728 - j) % p
        ap = int(K.ap_naive(3 * k % p, 2 * k * (1728 - j) % p, p))
        out.append((ap, half))
        out.append((-ap, half))
    g = _primitive_root(p)
    e6 = gcd(6, p - 1)
    for i in range(e6):
        out.append((int(K.ap_naive(0, pow(g, i, p), p)), Fraction(1, e6)))
    e4 = gcd(4, p - 1)
    for i in range(e4):
        out.append((int(K.ap_naive(pow(g, i, p), 0, p)), Fraction(1, e4)))
    return out


def moduli_sum(p: int, nu: int, subset: str = "all", include_nodal: bool = True) -> Fraction:
    """Sum of a_{p^nu}(E)/|Aut E| over the chosen classes over F_p."""
    if nu < 0:
        raise ValueError("nu must be >= 0")
    if subset not in SUBSETS:
        raise ValueError(f"unknown subset {subset!r}")
    total = Fraction(0)
    for ap, w in smooth_classes(p):
        ss = ap % p == 0
        if subset == "supersingular" and not ss:
            continue
        if subset == "ordinary" and ss:
            continue
        total += a_prime_power(ap, p, nu) * w
    if include_nodal and subset in ("all", "ordinary"):
        total += Fraction(1 + (-1) ** nu, 2)
    return total
