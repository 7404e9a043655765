"""Frobenius traces a_p and the Dirichlet coefficients a_n of a curve."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..curves import CurveSeed, disc_quantity
from . import _kernels as K

BSGS_CUTOFF = 229
NAIVE_LIMIT = 1 << 20
# bulk filling counts points directly below this; measured crossover on x86-64
FILL_NAIVE_BELOW = 1500


@dataclass(frozen=True)
class FrobeniusTrace:
    p: int
    value: int


@dataclass(frozen=True)
class CoefficientStreamSpec:
    n_max: int
    mode: str = "all"  # all | coprime | prime
    P: int = 1  # used by mode "coprime": keep n with no prime factor <= P

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.mode not in ("all", "coprime", "prime"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def accepts(self, n: int, lpf: np.ndarray) -> bool:
        if self.mode == "all":
            return True
        if self.mode == "prime":
            return n >= 2 and lpf[n] == n
        return n == 1 or lpf[n] > self.P


class BadReductionError(ValueError):
    pass


_lpf_cache = np.zeros(1, dtype=np.int32)


def lpf_table(n: int) -> np.ndarray:
    """Least prime factor table covering 0..n (shared, grown on demand)."""
    global _lpf_cache
    if len(_lpf_cache) <= n:
        size = max(n, 2 * (len(_lpf_cache) - 1), 1 << 16)
        _lpf_cache = K.lpf_sieve(size)
    return _lpf_cache


def _is_good(seed: CurveSeed, p: int) -> bool:
    if p >= 5:
        return disc_quantity(seed.A, seed.B) % p != 0
    from ..reduction import tate_local

    return tate_local(seed, p).kind == "good"


def _count_general(a, p: int) -> int:
    a1, a2, a3, a4, a6 = (int(c) % p for c in a)
    count = 1
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0:
                count += 1
    return p + 1 - count


def _ap_small(seed: CurveSeed, p: int) -> int:
    # p = 2, 3: count points on a model with good reduction at p
    from ..reduction.tate import tate

    res = tate((0, 0, 0, seed.A, seed.B), p)
    if res.kind != "good":
        raise BadReductionError(f"not good reduction at p={p}")
    return _count_general(res.model, p)


def ap_naive(seed: CurveSeed, p: int) -> int:
    """p + 1 - #E(F_p) by counting, for a prime of good reduction."""
    if p <= 3:
        return _ap_small(seed, p)
    if not _is_good(seed, p):
        raise BadReductionError(f"not good reduction at p={p}")
    if p > NAIVE_LIMIT:
        raise ValueError(f"p={p} beyond the naive counting budget")
    return int(K.ap_naive(seed.A % p, seed.B % p, p))


def ap_bsgs(seed: CurveSeed, p: int) -> int:
    """Same contract as ap_naive, via order finding in the Hasse interval."""
    if p <= BSGS_CUTOFF:
        return ap_naive(seed, p)
    if not _is_good(seed, p):
        raise BadReductionError(f"not good reduction at p={p}")
    v = int(K.ap_bsgs(seed.A % p, seed.B % p, p))
    if v == K.BSGS_FAIL:
        return int(K.ap_naive(seed.A % p, seed.B % p, p))
    return v


def ap(seed: CurveSeed, p: int) -> int:
    """a_p at any prime: bad primes give 1, -1 or 0."""
    if p <= 3 or not _is_good(seed, p):
        from ..reduction import tate_local

        loc = tate_local(seed, p)
        if loc.kind != "good":
            return loc.ap
        return _ap_small(seed, p)
    return ap_bsgs(seed, p)


def a_prime_power(ap_value: int, p: int, k: int, reduction: str = "good") -> int:
    """a_{p^k} from a_p: Hecke recurrence at good primes, a_p^k at bad ones."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if reduction != "good":
        return ap_value**k
    prev, cur = 1, ap_value
    if k == 0:
        return 1
    for _ in range(k - 1):
        prev, cur = cur, ap_value * cur - p * prev
    return cur


def coefficient_array(seed: CurveSeed, n_max: int, bad=None) -> np.ndarray:
    """int64 array a with a[n] = a_n(E) for 1 <= n <= n_max (a[0] = 0).

    bad is an iterable of reduction records with attributes p and kind; when
    omitted it is computed.
    """
    if bad is None:
        from ..reduction import local_data

        bad = [loc for loc in local_data(seed) if loc.kind != "good"]
    lpf = lpf_table(n_max)
    ap_arr = np.zeros(n_max + 1, dtype=np.int64)
    known = np.zeros(n_max + 1, dtype=np.bool_)
    bad_flag = np.zeros(n_max + 1, dtype=np.bool_)
    bad_ps = set()
    for loc in bad:
        if loc.kind == "good" or loc.p > n_max:
            continue
        bad_ps.add(loc.p)
        ap_arr[loc.p] = loc.ap
        known[loc.p] = True
        bad_flag[loc.p] = True
    for p in (2, 3):
        if p <= n_max and p not in bad_ps:
            ap_arr[p] = _ap_small(seed, p)
            known[p] = True
    K.fill_good_ap(seed.A, seed.B, n_max, lpf, ap_arr, known, max(BSGS_CUTOFF, FILL_NAIVE_BELOW))
    return K.coefficients(n_max, lpf, ap_arr, bad_flag)


def an_stream(seed: CurveSeed, reduction_data, spec: CoefficientStreamSpec, sink: Callable[[int, int], None]) -> None:
    """Call sink(n, a_n) once for each n <= spec.n_max passing the mode filter."""
    bad = reduction_data.locals if hasattr(reduction_data, "locals") else reduction_data
    a = coefficient_array(seed, spec.n_max, bad)
    lpf = lpf_table(spec.n_max)
    for n in range(1, spec.n_max + 1):
        if spec.accepts(n, lpf):
            sink(n, int(a[n]))


__all__ = [
    "FrobeniusTrace",
    "CoefficientStreamSpec",
    "BadReductionError",
    "ap_naive",
    "ap_bsgs",
    "ap",
    "a_prime_power",
    "coefficient_array",
    "an_stream",
    "lpf_table",
]
