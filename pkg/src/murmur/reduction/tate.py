"""Tate's algorithm for a general Weierstrass model at one prime.

Coefficients may be Python ints or padic.Ball objects.  With balls every
branch decision is certified to hold on the whole ball or Undetermined is
raised, which is what the cell-refinement oracle for local averages needs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .padic import divisible, exact_div, residue, valuation


@dataclass(frozen=True)
class TateResult:
    p: int
    kind: str  # good | split | nonsplit | additive
    kodaira: str | None = None
    exponent: int | None = None  # conductor exponent, None in kind-only mode
    model: tuple | None = None  # model minimal at p reached by the algorithm
    n: int | None = None  # index for I_n and I_n^*


def b_invariants(a):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(a):
    b2, b4, b6, _ = b_invariants(a)
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 * b2 * b2) + 36 * b2 * b4 - 216 * b6
    return c4, c6


def discriminant(a):
    b2, b4, b6, b8 = b_invariants(a)
    return -(b2 * b2 * b8) - 8 * (b4 * b4 * b4) - 27 * b6 * b6 + 9 * b2 * b4 * b6


def transform(a, r=0, s=0, t=0):
    """Substitute x -> x + r, y -> y + s x + t."""
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
    )


def _inv(x: int, p: int) -> int:
    return pow(x % p, -1, p)


def _roots_mod_p(coeffs, p):
    """Roots in F_p of a polynomial given by integer coefficients, low degree first."""
    out = []
    for x in range(p):
        v = 0
        for c in reversed(coeffs):
            v = (v * x + c) % p
        if v == 0:
            out.append(x)
    return out


def _double_root(b, c, d, p):
    # double root of T^3 + bT^2 + cT + d mod p (simple root also present)
    if p <= 3:
        for x in range(p):
            f = (x**3 + b * x * x + c * x + d) % p
            df = (3 * x * x + 2 * b * x + c) % p
            if f == 0 and df == 0:
                return x
        raise ArithmeticError("no double root")
    return (9 * d - b * c) * _inv(2 * (b * b - 3 * c), p) % p


def _triple_root(b, c, d, p):
    if p == 3:
        return (-d) % 3
    if p == 2:
        return b % 2
    return (-b * _inv(3, p)) % p


def _quad_double_root(lin, const, lead, p):
    # double root of lead*X^2 + lin*X + const mod p
    if p == 2:
        return const * lead % 2
    return (-lin * _inv(2 * lead, p)) % p


def tate(a, p: int, kind_only: bool = False) -> TateResult:
    """Run Tate's algorithm on the integral model a = (a1, a2, a3, a4, a6) at p."""
    while True:
        disc = discriminant(a)
        if not divisible(disc, 1, p):
            return TateResult(p, "good", "I0", 0, a)
        vd = None if kind_only else valuation(disc, p)

        b2, b4, b6, b8 = b_invariants(a)
        a1, a2, a3, a4, a6 = a
        # move the singular point of the reduction to (0, 0)
        if p == 2:
            if divisible(b2, 1, p):
                r = residue(a4, p)
                t = residue(r * (1 + a2 + a4) + a6, p)
            else:
                r = residue(a3, p)
                t = residue(r + a4, p)
        elif p == 3:
            if divisible(b2, 1, p):
                r = residue(-b6, p)
            else:
                r = residue(-b2 * b4, p)
            t = residue(a1 * r + a3, p)
        else:
            c4, c6 = c_invariants(a)
            if divisible(c4, 1, p):
                r = -_inv(12, p) * residue(b2, p) % p
            else:
                r = -_inv(12 * residue(c4, p), p) * residue(c6 + b2 * c4, p) % p
            t = -_inv(2, p) * residue(a1 * r + a3, p) % p
        a = transform(a, r, 0, t)
        a1, a2, a3, a4, a6 = a
        if not (divisible(a3, 1, p) and divisible(a4, 1, p) and divisible(a6, 1, p)):
            raise ArithmeticError("singular point not moved to the origin")

        b2, b4, b6, b8 = b_invariants(a)
        if not divisible(b2, 1, p):
            # multiplicative: split iff T^2 + a1 T - a2 has a root in F_p
            if p == 2:
                split = bool(_roots_mod_p([-residue(a2, p), residue(a1, p), 1], p))
            else:
                split = pow(residue(b2, p), (p - 1) // 2, p) == 1
            kind = "split" if split else "nonsplit"
            return TateResult(p, kind, None if kind_only else f"I{vd}", 1, a, vd)

        if not divisible(a6, 2, p):
            return _additive("II", p, kind_only, vd, 0, a)
        if not divisible(b8, 3, p):
            return _additive("III", p, kind_only, vd, 1, a)
        if not divisible(b6, 3, p):
            return _additive("IV", p, kind_only, vd, 2, a)

        # make p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s = residue(a2, 2)
            t = 2 * residue(exact_div(a6, 2, 2), 2)
        else:
            s = -residue(a1, p) * _inv(2, p) % p
            t = p * (-residue(exact_div(a3, 1, p), p) * _inv(2, p) % p)
        a = transform(a, 0, s, t)
        a1, a2, a3, a4, a6 = a
        b = residue(exact_div(a2, 1, p), p)
        c = residue(exact_div(a4, 2, p), p)
        d = residue(exact_div(a6, 3, p), p)
        cubic_disc = (b * b * c * c - 4 * c**3 - 4 * b**3 * d - 27 * d * d + 18 * b * c * d) % p
        if cubic_disc != 0:
            return _additive("I0*", p, kind_only, vd, 4, a)

        if (b * b - 3 * c) % p != 0:
            if kind_only:
                return TateResult(p, "additive", model=a)
            alpha = _double_root(b, c, d, p)
            a = transform(a, p * alpha, 0, 0)
            n = _subprocedure_in_star(a, p)
            return TateResult(p, "additive", f"I{n}*", vd - 4 - n, None, n)

        alpha = _triple_root(b, c, d, p)
        a = transform(a, p * alpha, 0, 0)
        a1, a2, a3, a4, a6 = a
        y3 = residue(exact_div(a3, 2, p), p)
        y6 = residue(exact_div(a6, 4, p), p)
        if (y3 * y3 + 4 * y6) % p != 0:
            return _additive("IV*", p, kind_only, vd, 6, a)
        t = p * p * _quad_double_root(y3, -y6, 1, p)
        a = transform(a, 0, 0, t)
        a1, a2, a3, a4, a6 = a
        if not divisible(a4, 4, p):
            return _additive("III*", p, kind_only, vd, 7, a)
        if not divisible(a6, 6, p):
            return _additive("II*", p, kind_only, vd, 8, a)
        # not minimal: rescale and start again
        a = tuple(exact_div(ai, k, p) for ai, k in zip(a, (1, 2, 3, 4, 6)))


def _additive(kodaira, p, kind_only, vd, drop, a):
    if kind_only:
        return TateResult(p, "additive", model=a)
    return TateResult(p, "additive", kodaira, vd - drop, None)


def _subprocedure_in_star(a, p: int) -> int:
    """Index n of an I_n^* fibre, with the double root already moved to 0."""
    ix, iy = 3, 3
    mx, my = p * p, p * p
    while True:
        a1, a2, a3, a4, a6 = a
        xa2 = exact_div(a2, 1, p)
        xa3 = exact_div(a3, iy - 1, p)
        xa6 = exact_div(a6, ix + iy - 2, p)
        if (xa3 * xa3 + 4 * xa6) % p != 0:
            return ix + iy - 5
        a = transform(a, 0, 0, my * _quad_double_root(xa3 % p, -xa6 % p, 1, p))
        my *= p
        iy += 1
        a1, a2, a3, a4, a6 = a
        xa2 = exact_div(a2, 1, p)
        xa4 = exact_div(a4, ix, p)
        xa6 = exact_div(a6, ix + iy - 2, p)
        if (xa4 * xa4 - 4 * xa2 * xa6) % p != 0:
            return ix + iy - 5
        a = transform(a, mx * _quad_double_root(xa4 % p, xa6 % p, xa2 % p, p), 0, 0)
        mx *= p
        ix += 1
