"""Closed forms for the local factors ell, ell_hat and ell_tilde."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..frobenius import a_prime_power
from .hecke import hecke_trace_sum
from .quad import scaled_chebyshev

F = Fraction


def _a3(s: int, nu: int) -> int:
    """3^(nu/2) U_nu(s / (2 sqrt 3)) by two routes, which must agree."""
    v = a_prime_power(s, 3, nu)
    if scaled_chebyshev(s, nu).rational() != v:
        raise ArithmeticError("Chebyshev routes disagree")
    return v


def _inv_mass(p: int) -> Fraction:
    return 1 / (1 - F(1, p**10))


def _even(nu: int) -> int:
    return 1 if nu % 2 == 0 else 0


@lru_cache(maxsize=None)
def ell(p: int, nu: int) -> Fraction:
    if nu < 0:
        raise ValueError("nu must be >= 0")
    if nu == 0:
        return F(1)
    if nu % 2:
        return F(0)
    T = hecke_trace_sum(p, nu + 2)
    if p > 3:
        return -(F(1, p) - F(1, p * p)) * _inv_mass(p) * T
    if p == 3:
        ss = F(_a3(3, nu) + 4 * _a3(0, nu) + _a3(-3, nu), 9)
        return ss - (F(1, 3**10) - F(1, 3**11)) * _inv_mass(3) * T
    return -F(1, 2**10) * _inv_mass(2) * T


@lru_cache(maxsize=None)
def ell_hat(p: int, nu: int) -> Fraction:
    if nu < 0:
        raise ValueError("nu must be >= 0")
    if nu % 2:
        return F(0)
    m = _inv_mass(p)
    if p > 3:
        if nu == 0:
            return (1 - F(1, p)) * m
        if nu == 2:
            return -(p - F(1, p) + F(1, p**2) - F(1, p**8)) * m / (p - 1)
        T = hecke_trace_sum(p, nu + 2)
        return -(F(1, p) - F(1, p * p)) * m * ((p + 1) * _even(nu) + T)
    if p == 3:
        if nu == 0:
            return (F(2, 3) + F(4, 3**11)) * m
        if nu == 2:
            return -(3 - F(1, 3**7) + 16 * F(1, 3**11)) * m / 2
        inner = _a3(3, nu) + 2 * _a3(0, nu) + F(_a3(2, nu) + _a3(1, nu), 3**9)
        return F(2, 9) * m * (inner - F(1, 3**8))
    if nu == 0:
        return F(1, 2**9) * m
    if nu == 2:
        return -(4 - F(1, 2**6) + 3 * F(1, 2**10)) * m
    T = hecke_trace_sum(2, nu + 2)
    return -F(1, 1023) * (3 * _even(nu) + T)


@lru_cache(maxsize=None)
def ell_tilde(p: int, nu: int) -> Fraction:
    if nu < 0:
        raise ValueError("nu must be >= 0")
    if nu == 0:
        return F(1)
    if nu % 2:
        return F(0)
    if p != 3:
        return -F(1, p) * (1 + hecke_trace_sum(p, nu + 2))
    inner = _a3(3, nu) + 2 * _a3(0, nu) + F(_a3(2, nu) + _a3(1, nu), 3**9)
    return inner / (3 * (1 + 2 * F(1, 3**10)))
