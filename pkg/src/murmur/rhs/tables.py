"""Multiplicative tables l(m), l'(m), psi(m), mu(m), phi(m) for m <= B."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..frobenius import lpf_table
from ..localfactors import LocalFactorTable

VARIANTS = ("hat", "tilde")
INF = math.inf


def is_infinite(P, B) -> bool:
    """P at or beyond B behaves like P = infinity for every truncated sum."""
    return P is None or P == INF or P >= B


@dataclass
class MultiplicativeTables:
    B: int
    P: float
    variant: str
    ell: np.ndarray  # l(m) = prod l_{p, 2 v_p(m)}
    ellp: np.ndarray  # l'(m): tilde or hat factors
    psi: np.ndarray
    mu: np.ndarray
    phi: np.ndarray
    lpf: np.ndarray = field(repr=False)

    def factor(self, m: int) -> list[tuple[int, int]]:
        out = []
        while m > 1:
            p = int(self.lpf[m])
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out.append((p, k))
        return out

    def phi_dP(self, d: int, m: int) -> int:
        """phi_{d,P}(m): the part of m the primed factor sees."""
        out = 1
        for p, k in self.factor(m):
            if self.variant == "tilde":
                keep = self.P == INF or p <= self.P
            else:
                keep = d % p == 0
            if keep:
                out *= p**k
        return out


def build_tables(B: int, P, variant: str, lft: LocalFactorTable | None = None) -> MultiplicativeTables:
    if B < 1:
        raise ValueError("B must be >= 1")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    lft = lft or LocalFactorTable()
    P = INF if P is None else P
    flavor = "tilde" if variant == "tilde" else "hat"
    lpf = lpf_table(B)
    ell = np.zeros(B + 1)
    ellp = np.zeros(B + 1)
    psi = np.zeros(B + 1)
    mu = np.zeros(B + 1, dtype=np.int64)
    phi = np.zeros(B + 1, dtype=np.int64)
    ell_q = [Fraction(0)] * (B + 1)
    ellp_q = [Fraction(0)] * (B + 1)
    psi_q = [Fraction(0)] * (B + 1)
    ell_q[1] = ellp_q[1] = psi_q[1] = Fraction(1)
    mu[1] = phi[1] = 1
    for m in range(2, B + 1):
        p = int(lpf[m])
        pk, k = p, 1
        while (m // pk) % p == 0:
            pk *= p
            k += 1
        rest = m // pk
        ell_q[m] = ell_q[rest] * lft.get(p, 2 * k, "plain")
        ellp_q[m] = ellp_q[rest] * lft.get(p, 2 * k, flavor)
        phi[m] = phi[rest] * (pk - pk // p)
        mu[m] = -mu[rest] if k == 1 else 0
        local_psi = Fraction(1, pk - pk // p)
        if variant == "hat":
            local_psi *= lft.get(p, 0, "hat")
        psi_q[m] = psi_q[rest] * local_psi
    for m in range(1, B + 1):
        ell[m] = float(ell_q[m])
        ellp[m] = float(ellp_q[m])
        psi[m] = float(psi_q[m])
    lft.flush()
    return MultiplicativeTables(B, P, variant, ell, ellp, psi, mu, phi, lpf)
