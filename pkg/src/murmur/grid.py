"""Window grids: (0, u_max] cut into r intervals I_j = (j delta, (j+1) delta]."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class WindowGrid:
    u_max: Fraction
    r: int

    def __init__(self, u_max=1, r: int = 100):
        u = Fraction(u_max)
        if u <= 0:
            raise ValueError("u_max must be positive")
        if r < 1:
            raise ValueError("r must be >= 1")
        object.__setattr__(self, "u_max", u)
        object.__setattr__(self, "r", int(r))

    @property
    def delta(self) -> Fraction:
        return self.u_max / self.r

    def midpoints(self) -> np.ndarray:
        """u_j = (j + 1/2) delta as floats."""
        d = float(self.delta)
        return (np.arange(self.r, dtype=np.float64) + 0.5) * d

    def n_max(self, N: int) -> int:
        return int(self.u_max * N)  # floor, u_max > 0

    def bin_of(self, n: int, N: int) -> int:
        """Index j with n/N in I_j, or -1 when n/N is outside (0, u_max]."""
        num, den = self.u_max.numerator, self.u_max.denominator
        if n <= 0 or n * den > num * N:
            return -1
        # smallest j with n/N <= (j+1) delta, i.e. ceil(n r den / (num N)) - 1
        return -(-(n * self.r * den) // (num * N)) - 1

    def coarsen(self, factor: int) -> "WindowGrid":
        if factor < 1 or self.r % factor:
            raise ValueError(f"factor {factor} does not divide r={self.r}")
        return WindowGrid(self.u_max, self.r // factor)
