"""Exact arithmetic in Q(sqrt 3), used to evaluate Chebyshev values at p = 3."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class QuadSqrt3:
    a: Fraction
    b: Fraction  # value a + b*sqrt(3)

    @staticmethod
    def of(a, b=0) -> "QuadSqrt3":
        return QuadSqrt3(Fraction(a), Fraction(b))

    def __add__(self, o):
        o = _lift(o)
        return QuadSqrt3(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = _lift(o)
        return QuadSqrt3(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return _lift(o) - self

    def __mul__(self, o):
        o = _lift(o)
        return QuadSqrt3(self.a * o.a + 3 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def rational(self) -> Fraction:
        if self.b != 0:
            raise ArithmeticError(f"irrational value {self}")
        return self.a


def _lift(x) -> QuadSqrt3:
    return x if isinstance(x, QuadSqrt3) else QuadSqrt3.of(x)


SQRT3 = QuadSqrt3.of(0, 1)


def scaled_chebyshev(s: int, nu: int) -> QuadSqrt3:
    """3^(nu/2) * U_nu(s / (2 sqrt 3)) computed in Q(sqrt 3)."""
    two_x = QuadSqrt3.of(0, Fraction(s, 3))  # s / sqrt 3
    prev, cur = QuadSqrt3.of(1), two_x
    if nu == 0:
        u = prev
    else:
        for _ in range(nu - 1):
            prev, cur = cur, two_x * cur - prev
        u = cur
    scale = QuadSqrt3.of(3 ** (nu // 2)) * (SQRT3 if nu % 2 else 1)
    return scale * u
