"""Numerical check of the twisted Voronoi summation identity for a_n(E).

For a smooth W supported in (0, u_max), a coprime to q and N = N(E) coprime
to q,

    eps sum_n a_n/sqrt(n) W(n/N) e(an/q)
        = (sqrt(N)/q) sum_n a_n/sqrt(n) e(-bar(aN) n/q) int 2 pi W(u) J1(4 pi sqrt(un)/q) du

where bar(aN) is the inverse of aN mod q.  Both sides are averaged over a and
-a, which replaces e(.) by cos(2 pi .) and keeps everything real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..curves import CurveSeed
from .bessel import bessel_j1, bessel_j2

_GL_NODES = 16


@dataclass(frozen=True)
class BumpWindow:
    """W(u) = c scale exp(-1/((u-a)(b-u))) on (a, b), zero elsewhere.

    c is chosen so that int W = scale.
    """

    a: float = 0.1
    b: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if not 0 <= self.a < self.b:
            raise ValueError("need 0 <= a < b")

    def raw(self, u):
        u = np.asarray(u, dtype=np.float64)
        out = np.zeros_like(u)
        m = (u > self.a) & (u < self.b)
        um = u[m]
        out[m] = np.exp(-1.0 / ((um - self.a) * (self.b - um)))
        return out

    @property
    def norm(self) -> float:
        nodes, weights = _panels(self.a, self.b, 64)
        return self.scale / float(np.dot(weights, self.raw(nodes)))

    def __call__(self, u):
        return self.norm * self.raw(u)


def _panels(a: float, b: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(_GL_NODES)
    edges = np.linspace(a, b, count + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def hankel_hat(a: float, b: float, y: float) -> float:
    """int 2 pi W(u) sqrt(u) J1(4 pi sqrt(u y)) du for W the normalized indicator of (a, b].

    Closed form from d/dt [t^2 J2(ct)] = c t^2 J1(ct) after substituting u = t^2.
    """
    if not 0 <= a < b:
        raise ValueError("need 0 <= a < b")
    if y <= 0:
        raise ValueError("y must be positive")
    sy = math.sqrt(y)
    top = b * bessel_j2(4 * math.pi * math.sqrt(b * y))
    bottom = a * bessel_j2(4 * math.pi * math.sqrt(a * y)) if a > 0 else 0.0
    return (top - bottom) / ((b - a) * sy)


def hankel_transform(window: BumpWindow, y: float, panels: int | None = None) -> float:
    """int 2 pi W(u) sqrt(u) J1(4 pi sqrt(u y)) du by composite quadrature."""
    if y <= 0:
        raise ValueError("y must be positive")
    if panels is None:
        panels = _panel_count(window, y, 1)
    nodes, weights = _panels(window.a, window.b, panels)
    vals = window(nodes) * np.sqrt(nodes) * bessel_j1(4 * math.pi * np.sqrt(nodes * y))
    return 2 * math.pi * float(np.dot(weights, vals))


def _panel_count(window: BumpWindow, n_top: float, q: int) -> int:
    # oscillations of J1(4 pi sqrt(u n)/q) across (a, b), two panels per period
    span = 4 * math.pi * math.sqrt(n_top) / q * (math.sqrt(window.b) - math.sqrt(window.a))
    return max(64, int(2 * span / (2 * math.pi)) + 1)


class VoronoiResult(NamedTuple):
    lhs: float
    rhs: float
    diff: float


def voronoi_check(seed: CurveSeed, q: int, a: int, window: BumpWindow | None = None,
                  n_cut_lhs: int | None = None, n_cut_rhs: int | None = None,
                  invariants=None) -> VoronoiResult:
    """Evaluate both sides of the identity; return (lhs, rhs, |lhs - rhs|)."""
    from ..frobenius import coefficient_array
    from ..reduction import global_invariants

    if q < 1:
        raise ValueError("q must be positive")
    if math.gcd(a, q) != 1:
        raise ValueError(f"gcd(a, q) = {math.gcd(a, q)} != 1")
    if window is None:
        window = BumpWindow()
    inv = invariants if invariants is not None else global_invariants(seed)
    N, eps = inv.N, inv.eps
    if math.gcd(N, q) != 1:
        raise ValueError(f"conductor {N} is not coprime to q = {q}; aN has no inverse mod q")
    bar = pow(a * N, -1, q) if q > 1 else 0

    if n_cut_lhs is None:
        n_cut_lhs = int(window.b * N)
    if n_cut_rhs is None:
        n_cut_rhs = 2000 * q
    n_max = max(n_cut_lhs, n_cut_rhs)
    coeffs = coefficient_array(seed, n_max, inv.locals).astype(np.float64)

    n = np.arange(1, n_cut_lhs + 1, dtype=np.float64)
    lhs_terms = coeffs[1:n_cut_lhs + 1] / np.sqrt(n) * window(n / N) * np.cos(2 * math.pi * ((a * np.arange(1, n_cut_lhs + 1)) % q) / q)
    lhs = eps * math.fsum(lhs_terms)

    nodes, weights = _panels(window.a, window.b, _panel_count(window, n_cut_rhs, q))
    wv = 2 * math.pi * weights * window(nodes)
    su = np.sqrt(nodes)
    rhs_terms = []
    ks = np.nonzero(coeffs[1:n_cut_rhs + 1])[0] + 1
    for start in range(0, len(ks), 256):
        block = ks[start:start + 256]
        arg = (4 * math.pi / q) * np.sqrt(block.astype(np.float64))[:, None] * su[None, :]
        integrals = bessel_j1(arg) @ wv
        phase = np.cos(2 * math.pi * ((bar * block) % q) / q)
        rhs_terms.extend(coeffs[block] / np.sqrt(block) * phase * integrals)
    rhs = math.sqrt(N) / q * math.fsum(rhs_terms)
    return VoronoiResult(lhs, rhs, abs(lhs - rhs))
