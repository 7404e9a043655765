import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from murmur.arith import factorint, is_prime
from murmur.curves import CurveSeed, enumerate_curves
from murmur.frobenius import coefficient_array
from murmur.grid import WindowGrid
from murmur.lhs import (
    INF,
    CurveRecordFile,
    accumulate_sums,
    lhs_aggregate,
    merge_records,
    normalize_P_list,
    read_records,
    write_records,
)
from murmur.reduction import global_invariants

P_LIST = [1, 2, 4, 8, INF]


def _direct(seed, grid, P):
    inv = global_invariants(seed)
    a = coefficient_array(seed, max(grid.n_max(inv.N), 1))
    out = [0] * grid.r
    for n in range(1, grid.n_max(inv.N) + 1):
        if P == INF:
            keep = is_prime(n)
        else:
            keep = n == 1 or min(factorint(n)) > P
        if keep:
            # n/N in (j delta, (j+1) delta], exact rationals
            j = math.ceil(Fraction(n, inv.N) / grid.delta) - 1
            out[j] += inv.eps * int(a[n])
    return out


def _records(X, grid, P_list=P_LIST):
    rows = []
    for s in enumerate_curves(X):
        inv = global_invariants(s)
        rows.append((s, inv, accumulate_sums(s, inv, grid, P_list)))
    return CurveRecordFile.from_rows(grid, P_list, X, rows)


def test_normalize_P_list():
    assert normalize_P_list([8, "inf", 1, 2, 2]) == (1, 2, 8, INF)
    assert normalize_P_list([None, 3]) == (3, INF)
    with pytest.raises(ValueError):
        normalize_P_list([0])


def test_single_window_sum():
    s = CurveSeed(1, 1)
    inv = global_invariants(s)
    sm = accumulate_sums(s, inv, WindowGrid(1, 1), [1])
    a = coefficient_array(s, inv.N)
    assert sm.s[0, 0] == inv.eps * int(a[1:inv.N + 1].sum())


def test_two_windows_brute_force():
    s = CurveSeed(0, 1)
    inv = global_invariants(s)
    a = coefficient_array(s, 36)
    sm = accumulate_sums(s, inv, WindowGrid(1, 2), [1])
    assert list(sm.row(1)) == [inv.eps * int(a[1:19].sum()), inv.eps * int(a[19:37].sum())]


@pytest.mark.parametrize("seed", [CurveSeed(0, 1), CurveSeed(-1, 0), CurveSeed(2, -3), CurveSeed(-5, 7)])
@pytest.mark.parametrize("grid", [WindowGrid(1, 7), WindowGrid(Fraction(3, 2), 12), WindowGrid(1, 36)])
def test_rows_match_direct(seed, grid):
    inv = global_invariants(seed)
    sm = accumulate_sums(seed, inv, grid, P_LIST)
    for P in P_LIST:
        assert list(sm.row(P)) == _direct(seed, grid, P), P
    assert sm.prime_mode == (False,) * 4 + (True,)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3000), st.integers(1, 5000), st.integers(1, 300), st.integers(1, 4), st.integers(1, 3))
def test_bin_partition_exact(n, N, r, num, den):
    grid = WindowGrid(Fraction(num, den), r)
    j = grid.bin_of(n, N)
    u = Fraction(n, N)
    if u > grid.u_max:
        assert j == -1
    else:
        assert j * grid.delta < u <= (j + 1) * grid.delta


def test_bins_cover_every_n_once():
    s = CurveSeed(3, 5)
    inv = global_invariants(s)
    grid = WindowGrid(1, 50)
    sm = accumulate_sums(s, inv, grid, [1])
    a = coefficient_array(s, inv.N)
    assert sm.s[0].sum() == inv.eps * int(a[1:inv.N + 1].sum())


def test_empty_range_is_zero():
    s = CurveSeed(0, 1)
    sm = accumulate_sums(s, global_invariants(s), WindowGrid(Fraction(1, 100), 4), [1, INF])
    assert not sm.s.any()


def test_record_roundtrip(tmp_path):
    grid = WindowGrid(1, 10)
    rec = _records(200, grid)
    path = tmp_path / "r.npz"
    write_records(path, rec)
    back = read_records(path, grid, P_LIST)
    assert back.header() == rec.header()
    for k in ("A", "B", "H", "N", "eps", "s"):
        assert np.array_equal(getattr(back, k), getattr(rec, k))
    with pytest.raises(ValueError):
        read_records(path, WindowGrid(1, 11))
    with pytest.raises(ValueError):
        read_records(path, grid, [1, 2])
    data = path.read_bytes()
    (tmp_path / "cut.npz").write_bytes(data[: len(data) // 2])
    with pytest.raises(ValueError):
        read_records(tmp_path / "cut.npz")


def test_merge_equals_single_pass():
    grid = WindowGrid(1, 10)
    whole = _records(300, grid)
    neg = whole.A < 0
    parts = []
    for mask in (neg, ~neg):
        parts.append(CurveRecordFile(grid.u_max, grid.r, P_LIST, 300, A=whole.A[mask], B=whole.B[mask],
                                     H=whole.H[mask], N=whole.N[mask], eps=whole.eps[mask], s=whole.s[mask]))
    merged = merge_records(parts[::-1])
    order = np.lexsort((whole.B, whole.A))
    assert np.array_equal(merged.A, whole.A[order])
    assert np.array_equal(merged.s, whole.s[order])
    for P in (1, INF):
        assert np.allclose(lhs_aggregate(merged, P, 300), lhs_aggregate(whole, P, 300), rtol=0, atol=1e-14)
    with pytest.raises(ValueError):
        merge_records([whole, whole])
    with pytest.raises(ValueError):
        merge_records([whole, _records(300, WindowGrid(1, 5))])


def test_lhs_aggregate_formula():
    grid = WindowGrid(1, 4)
    rec = _records(100, grid)
    d = 0.25
    n = len(rec)
    want1 = [sum(rec.s[i, 0, j] / rec.N[i] for i in range(n)) / (d * n) for j in range(4)]
    assert np.allclose(lhs_aggregate(rec, 1, 100), want1, rtol=1e-13)
    c = 2 * 1.5  # p/(p-1) for p = 2, 3
    want4 = [c * sum(rec.s[i, 2, j] / rec.N[i] for i in range(n)) / (d * n) for j in range(4)]
    assert np.allclose(lhs_aggregate(rec, 4, 100), want4, rtol=1e-13)
    wantinf = [sum(math.log((2 * j + 1) / 2 * d * rec.N[i]) * rec.s[i, 4, j] / rec.N[i] for i in range(n)) / (d * n)
               for j in range(4)]
    assert np.allclose(lhs_aggregate(rec, INF, 100), wantinf, rtol=1e-13)


def test_lhs_aggregate_filters():
    grid = WindowGrid(1, 4)
    rec = _records(2000, grid)
    some = lhs_aggregate(rec, 1, 500)
    sub = rec.H <= 500
    manual = CurveRecordFile(grid.u_max, grid.r, P_LIST, 500, A=rec.A[sub], B=rec.B[sub], H=rec.H[sub],
                             N=rec.N[sub], eps=rec.eps[sub], s=rec.s[sub])
    assert np.allclose(some, lhs_aggregate(manual, 1, 500), rtol=0, atol=1e-15)
    prime = np.array([is_prime(int(n)) for n in rec.N])
    odd = rec.N % 2 == 1
    for flag, mask, P in ((dict(prime_conductor_only=True), prime, 1), (dict(good_below_P=True), odd, 2)):
        if mask.any():
            row = rec.P_list.index(P)
            c = 2.0 if P == 2 else 1.0
            want = [c * sum(rec.s[mask, row, j] / rec.N[mask]) / (0.25 * mask.sum()) for j in range(4)]
            assert np.allclose(lhs_aggregate(rec, P, 2000, **flag), want, rtol=1e-13)
        else:
            with pytest.raises(ValueError, match="no curves under bound"):
                lhs_aggregate(rec, P, 2000, **flag)
    with pytest.raises(ValueError, match="no curves under bound"):
        lhs_aggregate(rec, 1, 3)
    with pytest.raises(ValueError):
        lhs_aggregate(rec, 16, 2000)
    with pytest.raises(ValueError):
        lhs_aggregate(rec, 1, 4000)


def test_linearity():
    grid = WindowGrid(1, 6)
    rec = _records(150, grid)
    zero = CurveRecordFile(grid.u_max, grid.r, P_LIST, 150, A=rec.A, B=rec.B, H=rec.H, N=rec.N, eps=rec.eps,
                           s=np.zeros_like(rec.s))
    assert not lhs_aggregate(zero, 1, 150).any()
    tripled = CurveRecordFile(grid.u_max, grid.r, P_LIST, 150, A=rec.A, B=rec.B, H=rec.H, N=rec.N, eps=rec.eps,
                              s=3 * rec.s)
    assert np.allclose(lhs_aggregate(tripled, INF, 150), 3 * lhs_aggregate(rec, INF, 150), rtol=1e-13)
