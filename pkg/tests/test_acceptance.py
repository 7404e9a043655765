"""Acceptance criteria 1-8.  Each test carries a criterion(n) mark; the
terminal summary prints one PASS/FAIL/SKIP line per criterion."""

import math
import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from murmur.curves import CurveSeed, enumerate_curves
from murmur.frobenius import a_prime_power, ap_bsgs, ap_naive, coefficient_array
from murmur.grid import WindowGrid
from murmur.lhs import INF, accumulate_sums, lhs_aggregate, read_records, CurveRecordFile
from murmur.localfactors import ell, ell_hat, ell_tilde, hecke_trace_sum, moduli_sum
from murmur.localfactors.bruteforce import ell_bruteforce, ell_hat_bruteforce, ell_tilde_bruteforce
from murmur.reduction import global_invariants
from murmur.rhs import (
    bessel_j1,
    build_tables,
    convergence_in_B,
    convergence_in_P,
    rhs_coarse,
    rhs_vector,
    voronoi_check,
)

c = pytest.mark.criterion


# ---- 1. curve counts

@c(1)
def test_curve_counts(note):
    for k, want in ((16, 5042), (17, 9014), (18, 15936)):
        t0 = time.perf_counter()
        res = subprocess.run([sys.executable, "-m", "murmur.cli", "enumerate", "--count-only", "-X", f"2^{k}"],
                             capture_output=True, text=True, check=True)
        dt = time.perf_counter() - t0
        assert int(res.stdout) == want
        assert dt < 1.0
        note(f"2^{k}: {want} in {dt:.2f}s")


# ---- 2. Table 1

TABLE1 = {
    (2**10, 2): 0.0344, (2**10, 4): 0.0512, (2**10, 2**10): 0.0602,
    (2**11, 2): 0.0063, (2**11, 4): 0.0064, (2**11, 2**10): 0.0171,
    (2**12, 2): 0.0170, (2**12, 4): 0.0211, (2**12, 2**10): 0.0220,
}


@c(2)
def test_table1(note):
    worst = 0.0
    for (B, P), want in TABLE1.items():
        got = convergence_in_B(P, B, r=100, variant="hat", u_max=1)
        assert abs(got - want) <= 0.002, (B, P, got, want)
        worst = max(worst, abs(got - want))
    note(f"9 cells, max deviation {worst:.1e}")


# ---- 3. cross-route identity

def _delta_coefficients(n):
    poly = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(24):
            for i in range(n, k - 1, -1):
                poly[i] -= poly[i - k]
    return [0] + poly[:n]  # index m holds the coefficient of q^m


@c(3)
def test_cross_route(note):
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    for p in primes:
        for nu in (10, 12, 14, 16):
            assert moduli_sum(p, nu, "all", True) == -hecke_trace_sum(p, nu + 2)
    tau = _delta_coefficients(3)
    assert hecke_trace_sum(2, 12) == tau[2] == -24
    assert hecke_trace_sum(3, 12) == tau[3] == 252
    note(f"{len(primes)} primes x 4 weights exact")


# ---- 4. closed forms vs defining integrals

@c(4)
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_definition_vs_formula(p):
    for nu in range(0, 13, 2):
        assert ell(p, nu) == ell_bruteforce(p, nu)
        assert ell_hat(p, nu) == ell_hat_bruteforce(p, nu)
        if nu:
            assert ell_tilde(p, nu) == ell_tilde_bruteforce(p, nu)


# ---- 5. Voronoi identity

VORONOI_CASES = [
    pytest.param(CurveSeed(0, 1), 1, 1, id="0,1-q1"),
    pytest.param(CurveSeed(-1, 0), 1, 1, id="-1,0-q1"),
    pytest.param(CurveSeed(1, 1), 1, 1, id="1,1-q1"),
    pytest.param(CurveSeed(0, 1), 3, 1, id="0,1-q3", marks=pytest.mark.xfail(
        raises=ValueError, strict=True, reason="N=36 shares the factor 3 with q, so aN has no inverse mod 3")),
    pytest.param(CurveSeed(-1, 0), 3, 1, id="-1,0-q3"),
    pytest.param(CurveSeed(1, 1), 3, 1, id="1,1-q3"),
]


@c(5)
@pytest.mark.parametrize("seed,q,a", VORONOI_CASES)
def test_voronoi(seed, q, a, note):
    res = voronoi_check(seed, q, a)
    assert res.diff < 1e-5
    note(f"({seed.A},{seed.B}) q={q}: |diff|={res.diff:.1e}")


# ---- 6. reduction oracle

@c(6)
def test_reduction_oracle(fixture_rows, note):
    for r in fixture_rows:
        seed = CurveSeed(int(r["A"]), int(r["B"]))
        inv = global_invariants(seed)
        assert (inv.N, inv.eps) == (int(r["N"]), int(r["eps"])), seed
        kinds = {int(x.split(":")[0]): x.split(":")[1] for x in r["locals"].split(";") if x}
        assert {loc.p: loc.kind for loc in inv.locals if loc.kind != "good"} == kinds, seed
    note(f"{len(fixture_rows)}/{len(fixture_rows)} curves agree")


# ---- 7. end-to-end Table 4 cell

@c(7)
def test_density_shape(note):
    """Qualitative shape of the density at desk truncation."""
    v = rhs_vector(WindowGrid(1, 200), INF, 4096, "hat")
    m = rhs_coarse(v, 10).values
    signs = np.sign(m)
    changes = np.nonzero(signs[1:] != signs[:-1])[0]
    assert m[0] > 0 and changes[0] <= 2 and len(changes) >= 3
    note(f"hump {m[0]:.2f} at u<0.05, first sign change near u={(changes[0] + 1) / 20:.2f}, {len(changes)} sign changes")


def _x16_records():
    path = os.environ.get("MURMUR_X16_RECORDS")
    if path and os.path.exists(path):
        return read_records(path)
    grid = WindowGrid(1, 2000)
    rows = []
    for s in enumerate_curves(2**16):
        inv = global_invariants(s)
        rows.append((s, inv, accumulate_sums(s, inv, grid, [1])))
    return CurveRecordFile.from_rows(grid, [1], 2**16, rows)


@c(7)
@pytest.mark.stretch
def test_table4_cell(note):
    rec = _x16_records()
    assert rec.r == 2000 and rec.u_max == 1 and len(rec.A[rec.H <= 2**16]) == 5042
    lhs = lhs_aggregate(rec, 1, 2**16)
    grid = WindowGrid(1, 2000)
    rhs = rhs_vector(grid, 1, 2**13, "hat").values
    mean = float(np.mean(np.abs(lhs - rhs)))
    cell = rhs_vector(grid, 1, 2**13, "hat", window_exact=True).values
    note(f"X=2^16 P=1 mean |LHS-RHS'| = {mean:.4f} at midpoints (B=2^13, r=2000); "
         f"{float(np.mean(np.abs(lhs - cell))):.4f} with window averages")
    assert abs(mean - 0.2271) <= 0.05


# ---- 8. property suites

@c(8)
def test_prop_hasse_growth_bsgs(note):
    rng = np.random.default_rng(8)
    seeds = [CurveSeed(int(a), int(b)) for a, b in rng.integers(-300, 300, size=(40, 2))
             if 4 * int(a) ** 3 + 27 * int(b) ** 2 != 0]
    primes = [p for p in range(230, 4000) if all(p % d for d in range(2, math.isqrt(p) + 1))]
    for s in seeds[:20]:
        for p in primes[::25]:
            if (4 * s.A**3 + 27 * s.B**2) % p:
                v = ap_bsgs(s, p)
                assert v == ap_naive(s, p)
                assert v * v <= 4 * p
                for k in range(8):
                    assert abs(a_prime_power(v, p, k)) <= (k + 1) * p ** (k / 2) + 1e-9
    note("Hasse, growth bound, BSGS = naive")


@c(8)
def test_prop_multiplicativity(note):
    for s in (CurveSeed(0, 1), CurveSeed(5, -3)):
        a = coefficient_array(s, 20000)
        for m in range(1, 140):
            for n in range(1, 20000 // m + 1, 7):
                if math.gcd(m, n) == 1:
                    assert a[m * n] == a[m] * a[n]
    t = build_tables(2048, 4, "hat")
    for m in range(1, 45):
        for n in range(1, 2048 // m + 1):
            if math.gcd(m, n) == 1:
                assert math.isclose(t.ell[m * n], t.ell[m] * t.ell[n], rel_tol=1e-13, abs_tol=1e-300)
                assert math.isclose(t.ellp[m * n], t.ellp[m] * t.ellp[n], rel_tol=1e-13, abs_tol=1e-300)
    note("a_n and sieved tables multiplicative")


@c(8)
def test_prop_odd_nu_vanishing():
    for p in (2, 3, 5, 7, 11, 13):
        for nu in range(1, 22, 2):
            assert ell(p, nu) == ell_hat(p, nu) == ell_tilde(p, nu) == 0


@c(8)
def test_prop_bin_partition():
    grid = WindowGrid(Fraction(3, 2), 37)
    for s in (CurveSeed(0, 1), CurveSeed(-4, 9)):
        inv = global_invariants(s)
        for n in range(1, grid.n_max(inv.N) + 1):
            j = grid.bin_of(n, inv.N)
            assert j * grid.delta < Fraction(n, inv.N) <= (j + 1) * grid.delta
        sm = accumulate_sums(s, inv, grid, [1])
        a = coefficient_array(s, grid.n_max(inv.N))
        assert sm.s[0].sum() == inv.eps * int(a[1:].sum())


@c(8)
def test_prop_convergence_in_P_at_B():
    assert convergence_in_P(1024, 1024) == 0.0


@c(8)
def test_prop_j1_golden(note):
    golden = {  # J1 from the exact-rational power series, 60 terms, rounded to 17 digits
        1.0: 0.44005058574493352,
        2.0: 0.57672480775687339,
        5.0: -0.32757913759146523,
        10.0: 0.043472746168861436,
    }
    for x, want in golden.items():
        assert abs(bessel_j1(x) - want) < 1e-10
    assert abs(bessel_j1(3.8317059702075123)) < 1e-10
    note("J1 golden values to 1e-10")
