"""Local reduction data, conductors and root numbers of short Weierstrass curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ..arith import is_prime, prime_factors
from ..curves import CurveSeed, disc_quantity
from .padic import vp
from .tate import TateResult, tate

KIND_NAMES = {"good": "good", "split": "split-mult", "nonsplit": "nonsplit-mult", "additive": "additive"}


@dataclass(frozen=True)
class LocalReduction:
    p: int
    kind: str  # good | split-mult | nonsplit-mult | additive
    conductor_exponent: int
    local_root_number: int | None = None  # None for good primes and for additive p in {2, 3}
    kodaira: str | None = None

    @property
    def ap(self) -> int | None:
        """a_p for bad primes; None at good primes."""
        return {"split-mult": 1, "nonsplit-mult": -1, "additive": 0}.get(self.kind)


@dataclass(frozen=True)
class GlobalInvariants:
    N: int
    eps: int
    locals: tuple[LocalReduction, ...]


def weierstrass(seed: CurveSeed) -> tuple[int, int, int, int, int]:
    return (0, 0, 0, seed.A, seed.B)


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _additive_root_number(seed: CurveSeed, p: int, res: TateResult) -> int | None:
    if p <= 3:
        return None
    # p >= 5: the short model is minimal at p
    A, B = seed.A, seed.B
    vd = vp(16 * disc_quantity(A, B), p)
    c4 = -48 * A
    if c4 != 0 and 3 * vp(c4, p) < vd:
        # potentially multiplicative: j has negative valuation
        return _legendre(-1, p)
    e = 12 // math.gcd(12, vd)
    if e in (2, 6):
        return _legendre(-1, p)
    if e == 3:
        return _legendre(-3, p)
    if e == 4:
        return _legendre(-2, p)
    raise ArithmeticError(f"unexpected semistability defect e={e} at p={p}")


def tate_local(seed: CurveSeed, p: int) -> LocalReduction:
    res = tate(weierstrass(seed), p)
    kind = KIND_NAMES[res.kind]
    if kind == "good":
        w = None
    elif kind == "split-mult":
        w = -1
    elif kind == "nonsplit-mult":
        w = 1
    else:
        w = _additive_root_number(seed, p, res)
    return LocalReduction(p, kind, res.exponent, w, res.kodaira)


def bad_primes(seed: CurveSeed) -> list[int]:
    ps = set(prime_factors(disc_quantity(seed.A, seed.B)))
    ps.update((2, 3))  # the short model can hide bad reduction at 2 and 3 behind a unit
    return sorted(ps)


@lru_cache(maxsize=4096)
def local_data(seed: CurveSeed) -> tuple[LocalReduction, ...]:
    """Reductions at every prime that could be bad, good ones at 2 and 3 included."""
    return tuple(tate_local(seed, p) for p in bad_primes(seed))


def conductor(seed: CurveSeed) -> int:
    n = 1
    for loc in local_data(seed):
        n *= loc.p**loc.conductor_exponent
    return n


def root_number(seed: CurveSeed, locals: list[LocalReduction] | tuple | None = None) -> int:
    """Global root number.

    Uses the product of local factors when every local factor is known.  When
    2 or 3 is additive the sign is read off the functional equation of
    sum a_n exp(-2 pi n t / sqrt N) instead.
    """
    if locals is None:
        locals = local_data(seed)
    bad = [loc for loc in locals if loc.kind != "good"]
    if all(loc.local_root_number is not None for loc in bad):
        prod = 1
        for loc in bad:
            prod *= loc.local_root_number
        return -prod
    N = 1
    for loc in bad:
        N *= loc.p**loc.conductor_exponent
    return analytic_root_number(seed, N, bad)


def analytic_root_number(seed: CurveSeed, N: int, bad: list[LocalReduction]) -> int:
    """Sign w with F(1/t) = w t^2 F(t), F(t) = sum a_n exp(-2 pi n t / sqrt N)."""
    import numpy as np

    from ..frobenius import coefficient_array

    ts = (1.05, 1.2, 1.35, 1.5)
    sq = math.sqrt(N)
    n_max = int(40 * sq * max(ts) / (2 * math.pi)) + 10
    a = coefficient_array(seed, n_max, bad).astype(np.float64)
    n = np.arange(n_max + 1, dtype=np.float64)
    votes = []
    for t in ts:
        f_t = math.fsum(a * np.exp(-2 * math.pi * n * t / sq))
        f_inv = math.fsum(a * np.exp(-2 * math.pi * n / (t * sq)))
        plus = abs(f_inv - t * t * f_t)
        minus = abs(f_inv + t * t * f_t)
        scale = abs(f_inv) + t * t * abs(f_t) + 1e-300
        if min(plus, minus) > 1e-6 * scale:
            raise ArithmeticError(f"functional equation fails for {seed} with N={N}")
        votes.append(1 if plus < minus else -1)
    if len(set(votes)) != 1:
        raise ArithmeticError(f"inconsistent root number for {seed}")
    return votes[0]


def global_invariants(seed: CurveSeed) -> GlobalInvariants:
    locs = local_data(seed)
    bad = tuple(loc for loc in locs if loc.kind != "good")
    return GlobalInvariants(conductor(seed), root_number(seed, bad), bad)


def is_prime_conductor(seed: CurveSeed) -> bool:
    return is_prime(conductor(seed))


__all__ = [
    "LocalReduction",
    "GlobalInvariants",
    "tate_local",
    "local_data",
    "conductor",
    "root_number",
    "analytic_root_number",
    "global_invariants",
    "is_prime",
    "is_prime_conductor",
    "bad_primes",
]
