"""Windowed sums s_{j,P}(E), per-curve record files, and the averaged LHS(j, P, X).

Rows of a SumMatrix follow P_list.  A finite P keeps the n with no prime
factor <= P (P = 1 keeps everything); P = inf keeps the primes only.
"""

from __future__ import annotations

import json
import math
import os
import zipfile
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from .arith import is_prime
from .curves import CurveSeed, naive_height
from .grid import WindowGrid

FORMAT_VERSION = 1
INF = math.inf


def normalize_P_list(P_list) -> tuple:
    """Sorted, de-duplicated cutoffs; 'inf', None and math.inf all mean P = infinity."""
    finite = set()
    has_inf = False
    for P in P_list:
        if P is None or (isinstance(P, str) and P.strip().lower() in ("inf", "infinity")) or P == INF:
            has_inf = True
            continue
        P = int(P)
        if P < 1:
            raise ValueError(f"P must be >= 1, got {P}")
        finite.add(P)
    out = tuple(sorted(finite))
    return out + ((INF,) if has_inf else ())


@njit(cache=True)
def _accumulate(coeffs, lpf, n_max, N, r, num, den, eps, finite_P, prime_row, out):
    nf = len(finite_P)
    for n in range(1, n_max + 1):
        a = coeffs[n]
        if a == 0:
            continue
        # n / N in (j delta, (j+1) delta], delta = num / (den r)
        j = -((-(n * r * den)) // (num * N)) - 1
        v = eps * a
        p = lpf[n]
        for i in range(nf):
            if n == 1 or p > finite_P[i]:
                out[i, j] += v
            else:
                break
        if prime_row >= 0 and n >= 2 and p == n:
            out[prime_row, j] += v


@dataclass
class SumMatrix:
    """Exact integer sums s[i, j] for P = P_list[i] and window I_j."""

    grid: WindowGrid
    P_list: tuple
    s: np.ndarray

    def row(self, P) -> np.ndarray:
        key = normalize_P_list([P])[0]
        return self.s[self.P_list.index(key)]

    @property
    def prime_mode(self) -> tuple:
        return tuple(P == INF for P in self.P_list)


def accumulate_sums(seed: CurveSeed, invariants, grid: WindowGrid, P_list, coeffs: np.ndarray | None = None) -> SumMatrix:
    """One pass over a_n, n <= floor(u_max N), feeding every P row at once."""
    from .frobenius import coefficient_array, lpf_table

    P_list = normalize_P_list(P_list)
    N, eps = invariants.N, invariants.eps
    out = np.zeros((len(P_list), grid.r), dtype=np.int64)
    n_max = grid.n_max(N)
    if n_max >= 1:
        if coeffs is None:
            coeffs = coefficient_array(seed, n_max, invariants.locals)
        lpf = lpf_table(n_max)
        finite = np.array([P for P in P_list if P != INF], dtype=np.int64)
        prime_row = len(finite) if INF in P_list else -1
        _accumulate(coeffs, lpf, n_max, N, grid.r, grid.u_max.numerator, grid.u_max.denominator,
                    eps, finite, prime_row, out)
    return SumMatrix(grid, P_list, out)


@dataclass
class CurveRecordFile:
    """Header plus one row per curve; s has shape (rows, len(P_list), r)."""

    u_max: Fraction
    r: int
    P_list: tuple
    X: int
    A: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    B: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    H: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    N: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    eps: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    s: np.ndarray | None = None

    def __post_init__(self):
        self.u_max = Fraction(self.u_max)
        self.P_list = normalize_P_list(self.P_list)
        if self.s is None:
            self.s = np.zeros((0, len(self.P_list), self.r), dtype=np.int64)

    @property
    def grid(self) -> WindowGrid:
        return WindowGrid(self.u_max, self.r)

    def header(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "u_max": str(self.u_max),
            "r": self.r,
            "P_list": ["inf" if P == INF else P for P in self.P_list],
            "X": self.X,
        }

    def same_layout(self, other: "CurveRecordFile") -> bool:
        return (self.u_max, self.r, self.P_list) == (other.u_max, other.r, other.P_list)

    def __len__(self) -> int:
        return len(self.A)

    @classmethod
    def from_rows(cls, grid: WindowGrid, P_list, X: int, rows: list) -> "CurveRecordFile":
        """rows: (seed, invariants, SumMatrix) triples."""
        P_list = normalize_P_list(P_list)
        rec = cls(grid.u_max, grid.r, P_list, X)
        if rows:
            rec.A = np.array([sd.A for sd, _, _ in rows], dtype=np.int64)
            rec.B = np.array([sd.B for sd, _, _ in rows], dtype=np.int64)
            rec.H = np.array([naive_height(sd.A, sd.B) for sd, _, _ in rows], dtype=np.int64)
            rec.N = np.array([inv.N for _, inv, _ in rows], dtype=np.int64)
            rec.eps = np.array([inv.eps for _, inv, _ in rows], dtype=np.int64)
            rec.s = np.stack([sm.s for _, _, sm in rows])
        return rec


def write_records(path: str | os.PathLike, rec: CurveRecordFile) -> None:
    """Atomic write of an .npz with a JSON header entry."""
    path = os.fspath(path)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        np.savez(fh, header=np.frombuffer(json.dumps(rec.header()).encode(), dtype=np.uint8),
                 A=rec.A, B=rec.B, H=rec.H, N=rec.N, eps=rec.eps, s=rec.s)
    os.replace(tmp, path)


def read_records(path: str | os.PathLike, expect_grid: WindowGrid | None = None, expect_P_list=None) -> CurveRecordFile:
    try:
        with np.load(os.fspath(path)) as z:
            header = json.loads(bytes(z["header"]).decode())
            arrays = {k: z[k] for k in ("A", "B", "H", "N", "eps", "s")}
    except (zipfile.BadZipFile, EOFError, KeyError, ValueError, OSError) as exc:
        raise ValueError(f"unreadable or truncated record file {path}: {exc}") from exc
    if header.get("version") != FORMAT_VERSION:
        raise ValueError(f"record format version {header.get('version')} != {FORMAT_VERSION}")
    rec = CurveRecordFile(Fraction(header["u_max"]), int(header["r"]), header["P_list"], int(header["X"]), **arrays)
    rows = len(rec.A)
    if any(len(arrays[k]) != rows for k in arrays) or rec.s.shape[1:] != (len(rec.P_list), rec.r):
        raise ValueError(f"record file {path} is inconsistent with its header")
    if expect_grid is not None and (expect_grid.u_max, expect_grid.r) != (rec.u_max, rec.r):
        raise ValueError(f"grid mismatch: file has u_max={rec.u_max}, r={rec.r}")
    if expect_P_list is not None and normalize_P_list(expect_P_list) != rec.P_list:
        raise ValueError(f"P_list mismatch: file has {rec.P_list}")
    return rec


def merge_records(parts: list[CurveRecordFile]) -> CurveRecordFile:
    """Union of record sets with identical layout and height bound; rows sorted by (A, B)."""
    if not parts:
        raise ValueError("nothing to merge")
    first = parts[0]
    for p in parts[1:]:
        if not first.same_layout(p) or p.X != first.X:
            raise ValueError("record files disagree on grid, P_list or X")
    A = np.concatenate([p.A for p in parts])
    B = np.concatenate([p.B for p in parts])
    order = np.lexsort((B, A))
    keys = np.stack([A[order], B[order]], axis=1)
    if len(keys) > 1 and np.any(np.all(keys[1:] == keys[:-1], axis=1)):
        raise ValueError("overlapping record files: a curve appears twice")
    cat = lambda name: np.concatenate([getattr(p, name) for p in parts])[order]  # noqa: E731
    return CurveRecordFile(first.u_max, first.r, first.P_list, first.X,
                           A=cat("A"), B=cat("B"), H=cat("H"), N=cat("N"), eps=cat("eps"), s=cat("s"))


def _small_primes(P: int) -> list[int]:
    return [p for p in range(2, P + 1) if all(p % d for d in range(2, math.isqrt(p) + 1))]


def lhs_aggregate(records: CurveRecordFile, P, X: int, prime_conductor_only: bool = False,
                  good_below_P: bool = False) -> np.ndarray:
    """LHS(j, P, X) = (1/delta)(1/#E) sum_E c_{j,P}(E) s_{j,P}(E) / N(E).

    The curve set is H(X).  prime_conductor_only keeps prime conductors;
    good_below_P keeps curves with good reduction at every p <= P, which is
    the family H_P(X) paired with the tilde density.
    """
    key = normalize_P_list([P])[0]
    if key not in records.P_list:
        raise ValueError(f"P={P} not in record P_list {records.P_list}")
    if X > records.X:
        raise ValueError(f"records only cover H <= {records.X}")
    row = records.P_list.index(key)
    mask = records.H <= X
    if prime_conductor_only:
        mask &= np.array([is_prime(int(n)) for n in records.N], dtype=bool)
    if good_below_P:
        if key == INF:
            raise ValueError("good_below_P needs a finite P")
        for p in _small_primes(key):
            mask &= records.N % p != 0
    count = int(mask.sum())
    if count == 0:
        raise ValueError("no curves under bound")
    grid = records.grid
    delta = float(grid.delta)
    Ns = records.N[mask]
    S = records.s[mask, row, :]
    out = np.empty(grid.r)
    if key != INF:
        c = math.prod(p / (p - 1) for p in _small_primes(key))
        for j in range(grid.r):
            out[j] = c * math.fsum(S[:, j] / Ns)
    else:
        for j in range(grid.r):
            cj = np.log((2 * j + 1) / 2 * delta * Ns)
            out[j] = math.fsum(cj * S[:, j] / Ns)
    return out / (delta * count)


__all__ = [
    "WindowGrid",
    "SumMatrix",
    "CurveRecordFile",
    "accumulate_sums",
    "lhs_aggregate",
    "write_records",
    "read_records",
    "merge_records",
    "normalize_P_list",
    "INF",
]
