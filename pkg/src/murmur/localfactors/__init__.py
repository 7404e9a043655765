"""Exact local factors ell, ell_hat, ell_tilde and their supporting sums."""

from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path

from .closed import ell, ell_hat, ell_tilde
from .hecke import class_number, hecke_trace_sum, hurwitz_weighted
from .moduli import moduli_sum, smooth_classes
from .quad import QuadSqrt3, scaled_chebyshev

FLAVORS = {"plain": ell, "hat": ell_hat, "tilde": ell_tilde}


class LocalFactorTable:
    """Lazy memo of (p, nu, flavor) -> Fraction, optionally backed by a file
    with lines ``p,nu,flavor,num/den``."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path else None
        self._memo: dict[tuple[int, int, str], Fraction] = {}
        self._dirty = False
        if self.path and self.path.exists():
            self.load(self.path)

    def get(self, p: int, nu: int, flavor: str = "plain") -> Fraction:
        key = (p, nu, flavor)
        val = self._memo.get(key)
        if val is None:
            if flavor not in FLAVORS:
                raise ValueError(f"unknown flavor {flavor!r}")
            val = FLAVORS[flavor](p, nu)
            self._memo[key] = val
            self._dirty = True
        return val

    def __len__(self):
        return len(self._memo)

    def load(self, path) -> None:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                p, nu, flavor, q = line.split(",")
                self._memo[(int(p), int(nu), flavor)] = Fraction(q)

    def save(self, path=None) -> None:
        path = Path(path or self.path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "w") as fh:
            for (p, nu, flavor), q in sorted(self._memo.items()):
                fh.write(f"{p},{nu},{flavor},{q.numerator}/{q.denominator}\n")
        os.replace(tmp, path)
        self._dirty = False

    def flush(self) -> None:
        if self.path and self._dirty:
            self.save()


__all__ = [
    "ell",
    "ell_hat",
    "ell_tilde",
    "class_number",
    "hecke_trace_sum",
    "hurwitz_weighted",
    "moduli_sum",
    "smooth_classes",
    "QuadSqrt3",
    "scaled_chebyshev",
    "LocalFactorTable",
    "FLAVORS",
]
