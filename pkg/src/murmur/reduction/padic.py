"""p-adic numbers known to finite precision.

A Ball stands for the set of p-adic integers congruent to ``v`` modulo
``p**prec``.  Arithmetic tracks how much precision survives, and every
question whose answer is not constant on the ball raises Undetermined.
Running an algorithm on balls therefore either certifies that all points
of the ball take the same branches, or asks the caller to refine.
"""

from __future__ import annotations


class Undetermined(Exception):
    """The answer depends on digits beyond the known precision."""


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class Ball:
    __slots__ = ("v", "prec", "p", "mod")

    def __init__(self, v: int, prec: int, p: int):
        if prec < 0:
            raise ValueError("negative precision")
        self.p = p
        self.prec = prec
        self.mod = p**prec
        self.v = v % self.mod

    def __repr__(self):
        return f"Ball({self.v} + O({self.p}^{self.prec}))"

    def val_lb(self) -> int:
        """A lower bound for the valuation, exact when v != 0."""
        if self.v == 0:
            return self.prec
        return vp(self.v, self.p)

    def _lift(self, other):
        if isinstance(other, Ball):
            return other
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return Ball(self.v + other, self.prec, self.p)
        prec = min(self.prec, o.prec)
        return Ball(self.v + o.v, prec, self.p)

    __radd__ = __add__

    def __neg__(self):
        return Ball(-self.v, self.prec, self.p)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            if other == 0:
                return 0
            prec = self.prec + vp(other, self.p)
            return Ball(self.v * other, prec, self.p)
        prec = min(self.prec + o.val_lb(), o.prec + self.val_lb())
        return Ball(self.v * o.v, prec, self.p)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self
        for _ in range(k - 1):
            out = out * self
        return out


def divisible(x, k: int, p: int) -> bool:
    """Is x divisible by p^k?"""
    if isinstance(x, Ball):
        if x.prec >= k:
            return x.v % p**k == 0
        if x.v != 0:
            return False
        raise Undetermined
    return x % p**k == 0


def residue(x, p: int) -> int:
    if isinstance(x, Ball):
        if x.prec < 1:
            raise Undetermined
        return x.v % p
    return x % p


def exact_div(x, k: int, p: int):
    """x / p^k for x known to be divisible by p^k."""
    if isinstance(x, Ball):
        if x.prec < k:
            raise Undetermined
        if x.v % p**k:
            raise ArithmeticError("not divisible")
        return Ball(x.v // p**k, x.prec - k, x.p)
    q, r = divmod(x, p**k)
    if r:
        raise ArithmeticError("not divisible")
    return q


def valuation(x, p: int) -> int:
    if isinstance(x, Ball):
        if x.v == 0:
            raise Undetermined
        return vp(x.v, p)
    return vp(x, p)
