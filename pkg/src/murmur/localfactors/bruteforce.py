"""Local factors straight from their defining p-adic integrals.

Z_p^2 is cut into cells (A mod p^ka, B mod p^kb).  Tate's algorithm is run
on each cell as a pair of p-adic balls; a cell is split further only when
the reduction type (or a_p) is not constant on it.  The result is the exact
measure of each reduction behaviour, from which every local factor at every
nu follows.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..frobenius import a_prime_power
from ..reduction.padic import Ball, Undetermined, residue
from ..reduction.tate import tate
from .moduli import _count_general

MAX_DEPTH = 48


@dataclass
class ReductionMeasure:
    p: int
    good: dict[int, Fraction] = field(default_factory=dict)  # a_p -> measure
    split: Fraction = Fraction(0)
    nonsplit: Fraction = Fraction(0)
    additive: Fraction = Fraction(0)
    cells: int = 0

    @property
    def good_total(self) -> Fraction:
        return sum(self.good.values(), Fraction(0))

    @property
    def total(self) -> Fraction:
        return self.good_total + self.split + self.nonsplit + self.additive

    def good_moment(self, nu: int) -> Fraction:
        return sum((m * a_prime_power(t, self.p, nu) for t, m in self.good.items()), Fraction(0))


def _classify(va, ka, vb, kb, p):
    model = (0, 0, 0, Ball(va, ka, p), Ball(vb, kb, p))
    res = tate(model, p, kind_only=True)
    if res.kind == "good":
        a = tuple(residue(c, p) for c in res.model)
        return "good", _count_general(a, p)
    return res.kind, None


@lru_cache(maxsize=None)
def reduction_measure(p: int) -> ReductionMeasure:
    """Exact measures of good (by a_p), split, nonsplit and additive reduction
    on Z_p^2 minus p^4 Z_p x p^6 Z_p."""
    out = ReductionMeasure(p)
    good = defaultdict(Fraction)
    stack = [(va, 1, vb, 1) for va in range(p) for vb in range(p)]
    while stack:
        va, ka, vb, kb = stack.pop()
        if ka + kb > MAX_DEPTH:
            raise RuntimeError(f"cell refinement did not terminate at p={p}")
        za = va % p ** min(ka, 4) == 0
        zb = vb % p ** min(kb, 6) == 0
        if za and zb:
            if ka >= 4 and kb >= 6:
                continue  # excluded region
            split_a = ka < 4 and (kb >= 6 or 3 * ka <= 2 * kb)
        else:
            try:
                kind, ap = _classify(va, ka, vb, kb, p)
            except Undetermined:
                split_a = 3 * ka <= 2 * kb
            else:
                w = Fraction(1, p ** (ka + kb))
                out.cells += 1
                if kind == "good":
                    good[ap] += w
                elif kind == "split":
                    out.split += w
                elif kind == "nonsplit":
                    out.nonsplit += w
                else:
                    out.additive += w
                continue
        if split_a:
            stack.extend((va + i * p**ka, ka + 1, vb, kb) for i in range(p))
        else:
            stack.extend((va, ka, vb + i * p**kb, kb + 1) for i in range(p))
    out.good = dict(sorted(good.items()))
    expected = 1 - Fraction(1, p**10)
    if out.total != expected:
        raise ArithmeticError(f"measures at p={p} sum to {out.total}, expected {expected}")
    return out


def _mass(p):
    return 1 - Fraction(1, p**10)


def ell_bruteforce(p: int, nu: int) -> Fraction:
    m = reduction_measure(p)
    val = m.good_moment(nu) + m.split + (-1) ** nu * m.nonsplit
    if nu == 0:
        val += m.additive
    return val / _mass(p)


def ell_hat_bruteforce(p: int, nu: int) -> Fraction:
    m = reduction_measure(p)
    mult = m.split + (-1) ** nu * m.nonsplit  # integral of a_{p^nu} over multiplicative cells
    if nu == 0:
        val = m.good_total
    elif nu == 1:
        val = m.good_moment(1) + mult / (1 - Fraction(1, p))
    elif nu == 2:
        val = m.good_moment(2) - p * mult - Fraction(p * p, p - 1) * m.additive
    else:
        val = m.good_moment(nu) - p * mult
    return val / _mass(p)


def ell_tilde_bruteforce(p: int, nu: int) -> Fraction:
    m = reduction_measure(p)
    return m.good_moment(nu) / m.good_total
