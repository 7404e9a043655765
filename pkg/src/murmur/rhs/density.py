"""The truncated density RHS(j, P, B) and its diagnostics.

The triple sum over (q, d, m) is flattened into a list of pairs
(x = m/q, coefficient) with equal x merged, so every Bessel evaluation is
shared by all terms with the same argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit, prange

from ..grid import WindowGrid
from .bessel import jn_scalar
from .tables import INF, MultiplicativeTables, build_tables, is_infinite


@dataclass
class DensityVector:
    grid: WindowGrid
    P: float
    B: int
    variant: str
    values: np.ndarray

    @property
    def midpoints(self) -> np.ndarray:
        return self.grid.midpoints()


@dataclass
class TermList:
    num: np.ndarray  # m / g
    den: np.ndarray  # q / g
    coef: np.ndarray

    def __len__(self):
        return len(self.coef)


def _squarefree_smooth(B: int, P, tables: MultiplicativeTables) -> list[int]:
    out = []
    for q in range(1, B + 1):
        if tables.mu[q] == 0:
            continue
        if P != INF and q > 1 and max(p for p, _ in tables.factor(q)) > P:
            continue
        out.append(q)
    return out


def _divisors_sqfree(primes: list[int]) -> list[tuple[int, list[int]]]:
    out = [(1, [])]
    for p in primes:
        out += [(d * p, ps + [p]) for d, ps in out]
    return out


def _with_support(primes: list[int], bound: int) -> list[int]:
    """All m <= bound whose set of prime factors is exactly primes."""
    out = [1]
    for p in primes:
        nxt = []
        for m in out:
            v = m * p
            while v <= bound:
                nxt.append(v)
                v *= p
        out = nxt
    return out


def _merge(num: list[int], den: list[int], coef: list[float]) -> TermList:
    if not coef:
        return TermList(np.zeros(0, np.int64), np.ones(0, np.int64), np.zeros(0))
    n = np.asarray(num, dtype=np.int64)
    d = np.asarray(den, dtype=np.int64)
    c = np.asarray(coef, dtype=np.float64)
    g = np.gcd(n, d)
    n //= g
    d //= g
    keys = n * (d.max() + 1) + d
    uniq, inv = np.unique(keys, return_inverse=True)
    summed = np.bincount(inv, weights=c, minlength=len(uniq))
    first = np.zeros(len(uniq), dtype=np.int64)
    first[inv] = np.arange(len(inv))
    keep = summed != 0
    return TermList(n[first][keep], d[first][keep], summed[keep])


def collect_terms(tables: MultiplicativeTables, mode: str = "sparse") -> TermList:
    """Flatten the (q, d, m) sum.  mode 'scan' visits every m <= B and is the
    reference for small B; 'sparse' only builds m with nonzero local factors."""
    B, P = tables.B, tables.P
    if is_infinite(P, B):
        P = INF
    num: list[int] = []
    den: list[int] = []
    coef: list[float] = []
    qs = _squarefree_smooth(B, P, tables)
    if mode == "scan":
        for q in qs:
            cq = tables.psi[q] / q
            for m in range(1, B + 1):
                d = math.gcd(m, q)
                if tables.mu[d] == 0:
                    continue
                f = tables.phi_dP(d, m)
                w = tables.ellp[f] * tables.ell[m // f]
                if w == 0:
                    continue
                num.append(m)
                den.append(q)
                coef.append(cq * tables.mu[d] / tables.psi[d] * w / m)
        return _merge(num, den, coef)
    if mode != "sparse":
        raise ValueError(f"unknown mode {mode!r}")
    # l(m_r) is supported on very few m_r, list them once
    rough = [(m, tables.ell[m]) for m in range(1, B + 1) if tables.ell[m] != 0]
    if tables.variant == "hat":
        for q in qs:
            cq = tables.psi[q] / q
            qprimes = [p for p, _ in tables.factor(q)]
            r_ok = [(m, w) for m, w in rough if math.gcd(m, q) == 1]
            for d, dprimes in _divisors_sqfree(qprimes):
                cd = cq * tables.mu[d] / tables.psi[d]
                for md in _with_support(dprimes, B):
                    wd = tables.ellp[md]
                    if wd == 0:
                        continue
                    for mr, wr in r_ok:
                        m = md * mr
                        if m > B:
                            continue
                        num.append(m)
                        den.append(q)
                        coef.append(cd * wd * wr / m)
        return _merge(num, den, coef)
    # tilde: phi_{d,P}(m) is the P-smooth part m_s; gcd(m, q) = gcd(m_s, q) = d
    if P == INF:
        smooth = list(range(1, B + 1))
        rough_p = [(1, 1.0)]
    else:
        smooth = [m for m in range(1, B + 1) if m == 1 or max(p for p, _ in tables.factor(m)) <= P]
        rough_p = [(m, w) for m, w in rough if m == 1 or min(p for p, _ in tables.factor(m)) > P]
    smooth_w = [(m, tables.ellp[m]) for m in smooth if tables.ellp[m] != 0]
    for q in qs:
        cq = tables.psi[q] / q
        for ms, ws in smooth_w:
            d = math.gcd(ms, q)
            cd = cq * tables.mu[d] / tables.psi[d]
            for mr, wr in rough_p:
                m = ms * mr
                if m > B:
                    continue
                num.append(m)
                den.append(q)
                coef.append(cd * ws * wr / m)
    return _merge(num, den, coef)


@njit(cache=True, parallel=True)
def _evaluate(us, x, coef):
    # one output slot per j, so results do not depend on the thread count
    out = np.empty(len(us))
    for j in prange(len(us)):
        s = math.sqrt(us[j])
        # Neumaier compensated summation
        total = 0.0
        comp = 0.0
        for k in range(len(x)):
            v = coef[k] * jn_scalar(1, 4.0 * math.pi * s * x[k])
            t = total + v
            if abs(total) >= abs(v):
                comp += (total - t) + v
            else:
                comp += (v - t) + total
            total = t
        out[j] = 2.0 * math.pi * s * (total + comp)
    return out


@njit(cache=True, parallel=True)
def _evaluate_exact(edges, x, coef):
    # interval averages of 2 pi sqrt(u) J1(4 pi sqrt(u) x) over (edges[j], edges[j+1]]
    out = np.empty(len(edges) - 1)
    for j in prange(len(edges) - 1):
        a = edges[j]
        b = edges[j + 1]
        sa = math.sqrt(a)
        sb = math.sqrt(b)
        total = 0.0
        comp = 0.0
        for k in range(len(x)):
            top = b * jn_scalar(2, 4.0 * math.pi * sb * x[k])
            bottom = a * jn_scalar(2, 4.0 * math.pi * sa * x[k])
            v = coef[k] * (top - bottom) / x[k]
            t = total + v
            if abs(total) >= abs(v):
                comp += (total - t) + v
            else:
                comp += (v - t) + total
            total = t
        out[j] = (total + comp) / (b - a)
    return out


def evaluate_terms(terms: TermList, us) -> np.ndarray:
    us = np.atleast_1d(np.asarray(us, dtype=np.float64))
    x = terms.num.astype(np.float64) / terms.den.astype(np.float64)
    return _evaluate(us, x, terms.coef)


@lru_cache(maxsize=32)
def _cached_terms(B: int, P, variant: str) -> TermList:
    return collect_terms(build_tables(B, P, variant))


def _norm_P(P, B):
    return INF if is_infinite(P, B) else P


def rhs_point(j: int, grid: WindowGrid, P, B: int, tables: MultiplicativeTables | None = None,
              variant: str = "hat") -> float:
    if not 0 <= j < grid.r:
        raise IndexError(f"j={j} outside grid of size {grid.r}")
    u = (j + 0.5) * float(grid.delta)
    terms = collect_terms(tables) if tables is not None else _cached_terms(B, _norm_P(P, B), variant)
    return float(evaluate_terms(terms, [u])[0])


def rhs_vector(grid: WindowGrid, P, B: int, variant: str = "hat",
               tables: MultiplicativeTables | None = None, window_exact: bool = False) -> DensityVector:
    """RHS(j, P, B) at every midpoint, or averaged over each I_j when window_exact."""
    terms = collect_terms(tables) if tables is not None else _cached_terms(B, _norm_P(P, B), variant)
    if window_exact:
        edges = np.arange(grid.r + 1, dtype=np.float64) * float(grid.delta)
        x = terms.num.astype(np.float64) / terms.den.astype(np.float64)
        vals = _evaluate_exact(edges, x, terms.coef)
    else:
        vals = evaluate_terms(terms, grid.midpoints())
    return DensityVector(grid, _norm_P(P, B), B, variant, vals)


def rhs_direct_p1(grid: WindowGrid, B: int, lft=None) -> np.ndarray:
    """P = 1 density as the single sum 2 pi sqrt(u) sum_m l(m)/m J1(4 pi sqrt(u) m).

    Builds l(m) from its prime-power factors independently of the table code.
    """
    from ..arith import factorint
    from ..localfactors import ell

    ms, cs = [], []
    for m in range(1, B + 1):
        val = 1.0
        for p, k in factorint(m).items():
            val *= float(ell(p, 2 * k))
            if val == 0:
                break
        if val:
            ms.append(m)
            cs.append(val / m)
    us = grid.midpoints()
    out = np.empty(len(us))
    for j, u in enumerate(us):
        s = math.sqrt(u)
        out[j] = 2 * math.pi * s * math.fsum(c * jn_scalar(1, 4 * math.pi * s * m) for m, c in zip(ms, cs))
    return out


def rhs_coarse(dense: DensityVector, factor: int) -> DensityVector:
    grid = dense.grid.coarsen(factor)
    vals = dense.values.reshape(grid.r, factor).mean(axis=1)
    return DensityVector(grid, dense.P, dense.B, dense.variant, vals)


def interpolation_residual(coarse_r: int, P, B: int, variant: str = "hat", u_max=1) -> float:
    """max_{1 <= j < 2r-1} |RHS_{2r}(j) - linear interpolation from RHS_r|."""
    r = coarse_r
    a = rhs_vector(WindowGrid(u_max, r), P, B, variant).values
    b = rhs_vector(WindowGrid(u_max, 2 * r), P, B, variant).values
    worst = 0.0
    for j in range(1, 2 * r - 1):
        sgn = 1 if j % 2 == 0 else -1
        i = j // 2
        if i + 1 >= r:
            continue
        approx = ((2 + sgn) * a[i] + (2 - sgn) * a[i + 1]) / 4
        worst = max(worst, abs(b[j] - approx))
    return worst


def convergence_in_B(P, B: int, r: int = 100, variant: str = "hat", u_max=1) -> float:
    grid = WindowGrid(u_max, r)
    a = rhs_vector(grid, P, B, variant).values
    b = rhs_vector(grid, P, 2 * B, variant).values
    return float(np.max(np.abs(a - b)))


def convergence_in_P(P, B: int, r: int = 100, variant: str = "hat", u_max=1) -> float:
    if is_infinite(P, B):
        return 0.0
    grid = WindowGrid(u_max, r)
    a = rhs_vector(grid, P, B, variant).values
    b = rhs_vector(grid, INF, B, variant).values
    return float(np.max(np.abs(a - b)))
