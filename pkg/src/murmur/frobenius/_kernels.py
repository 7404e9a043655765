"""Compiled inner loops: point counting, BSGS order finding, coefficient sieves.

All residues stay below 2^31 so products fit in int64.
"""

import numpy as np
from numba import njit

BSGS_FAIL = np.int64(1) << 62


@njit(cache=True)
def chi_table(p):
    chi = -np.ones(p, dtype=np.int8)
    chi[0] = 0
    for y in range(1, (p + 1) // 2 + 1):
        chi[(y * y) % p] = 1
    return chi


@njit(cache=True)
def ap_naive(A, B, p):
    """-sum_x chi(x^3 + A x + B) for the short model mod an odd prime p."""
    chi = chi_table(p)
    a = A % p
    b = B % p
    s = 0
    for x in range(p):
        v = (x * x) % p
        v = (v * x + a * x + b) % p
        s += chi[v]
    return -s


@njit(cache=True)
def powmod(b, e, p):
    r = 1
    b %= p
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


@njit(cache=True)
def invmod(a, p):
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % p


@njit(cache=True)
def ec_add(x1, y1, z1, x2, y2, z2, a, p):
    # affine points, z = 0 marks the point at infinity
    if z1 == 0:
        return x2, y2, z2
    if z2 == 0:
        return x1, y1, z1
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return 0, 0, 0
        num = (3 * ((x1 * x1) % p) + a) % p
        lam = (num * invmod(2 * y1, p)) % p
    else:
        lam = (((y2 - y1) % p) * invmod((x2 - x1) % p, p)) % p
    x3 = ((lam * lam) % p - x1 - x2) % p
    y3 = ((lam * ((x1 - x3) % p)) % p - y1) % p
    return x3, y3, 1


@njit(cache=True)
def ec_mul(k, x, y, z, a, p):
    rx, ry, rz = 0, 0, 0
    bx, by, bz = x, y, z
    while k > 0:
        if k & 1:
            rx, ry, rz = ec_add(rx, ry, rz, bx, by, bz, a, p)
        bx, by, bz = ec_add(bx, by, bz, bx, by, bz, a, p)
        k >>= 1
    return rx, ry, rz


# Jacobian coordinates (X : Y : Z) <-> (X/Z^2, Y/Z^3); Z = 0 is the point at
# infinity.  No inversions, which is what makes the searches below cheap.


@njit(cache=True)
def jac_dbl(X, Y, Z, a, p):
    if Z == 0 or Y == 0:
        return 1, 1, 0
    XX = (X * X) % p
    YY = (Y * Y) % p
    ZZ = (Z * Z) % p
    S = (4 * ((X * YY) % p)) % p
    M = (3 * XX + (a * ((ZZ * ZZ) % p)) % p) % p
    X3 = ((M * M) % p - 2 * S) % p
    Y3 = ((M * ((S - X3) % p)) % p - (8 * ((YY * YY) % p)) % p) % p
    Z3 = (2 * ((Y * Z) % p)) % p
    return X3, Y3, Z3


@njit(cache=True)
def jac_add(X1, Y1, Z1, X2, Y2, Z2, a, p):
    if Z1 == 0:
        return X2, Y2, Z2
    if Z2 == 0:
        return X1, Y1, Z1
    Z1Z1 = (Z1 * Z1) % p
    Z2Z2 = (Z2 * Z2) % p
    U1 = (X1 * Z2Z2) % p
    U2 = (X2 * Z1Z1) % p
    S1 = (Y1 * ((Z2 * Z2Z2) % p)) % p
    S2 = (Y2 * ((Z1 * Z1Z1) % p)) % p
    if U1 == U2:
        if S1 == S2:
            return jac_dbl(X1, Y1, Z1, a, p)
        return 1, 1, 0
    H = (U2 - U1) % p
    R = (S2 - S1) % p
    HH = (H * H) % p
    HHH = (H * HH) % p
    V = (U1 * HH) % p
    X3 = ((R * R) % p - HHH - 2 * V) % p
    Y3 = ((R * ((V - X3) % p)) % p - (S1 * HHH) % p) % p
    Z3 = (((Z1 * Z2) % p) * H) % p
    return X3, Y3, Z3


@njit(cache=True)
def jac_mul(k, x, y, a, p):
    """k * (x, y) for an affine point, result in Jacobian coordinates."""
    RX, RY, RZ = 1, 1, 0
    if k == 0:
        return RX, RY, RZ
    top = 0
    while (k >> top) > 1:
        top += 1
    for bit in range(top, -1, -1):
        RX, RY, RZ = jac_dbl(RX, RY, RZ, a, p)
        if (k >> bit) & 1:
            RX, RY, RZ = jac_add(RX, RY, RZ, x, y, 1, a, p)
    return RX, RY, RZ


@njit(cache=True)
def _normalize(X, Y, Z, ax, ay, p):
    """Batch conversion to affine (Montgomery's trick); -1 marks infinity."""
    n = len(X)
    prefix = np.empty(n, dtype=np.int64)
    acc = 1
    for i in range(n):
        prefix[i] = acc
        if Z[i] != 0:
            acc = (acc * Z[i]) % p
    inv = invmod(acc, p)
    for i in range(n - 1, -1, -1):
        if Z[i] == 0:
            ax[i] = -1
            ay[i] = -1
            continue
        zi = (inv * prefix[i]) % p
        inv = (inv * Z[i]) % p
        z2 = (zi * zi) % p
        ax[i] = (X[i] * z2) % p
        ay[i] = (Y[i] * ((z2 * zi) % p)) % p


@njit(cache=True)
def _multiple_in_window(x, y, a, p, lo, width):
    """Some M in [lo, lo + width] with M*P = O, or -1."""
    m = int(np.sqrt(width)) + 1
    JX = np.empty(m, dtype=np.int64)
    JY = np.empty(m, dtype=np.int64)
    JZ = np.empty(m, dtype=np.int64)
    cx, cy, cz = 1, 1, 0
    for j in range(m):
        JX[j] = cx
        JY[j] = cy
        JZ[j] = cz
        cx, cy, cz = jac_add(cx, cy, cz, x, y, 1, a, p)
    bx = np.empty(m, dtype=np.int64)
    by = np.empty(m, dtype=np.int64)
    _normalize(JX, JY, JZ, bx, by, p)
    # cx, cy, cz is now m * P
    gx = np.empty(1, dtype=np.int64)
    gy = np.empty(1, dtype=np.int64)
    _normalize(np.array([cx]), np.array([cy]), np.array([cz]), gx, gy, p)
    GX = np.empty(m + 1, dtype=np.int64)
    GY = np.empty(m + 1, dtype=np.int64)
    GZ = np.empty(m + 1, dtype=np.int64)
    rx, ry, rz = jac_mul(lo, x, y, a, p)
    for i in range(m + 1):
        GX[i] = rx
        GY[i] = ry
        GZ[i] = rz
        if gx[0] < 0:
            rx, ry, rz = jac_add(rx, ry, rz, 1, 1, 0, a, p)
        else:
            rx, ry, rz = jac_add(rx, ry, rz, gx[0], gy[0], 1, a, p)
    sx_all = np.empty(m + 1, dtype=np.int64)
    sy_all = np.empty(m + 1, dtype=np.int64)
    _normalize(GX, GY, GZ, sx_all, sy_all, p)
    order = np.argsort(bx)
    sx = bx[order]
    for i in range(m + 1):
        base = i * m
        rx = sx_all[i]
        ry = sy_all[i]
        if rx < 0:
            return lo + base
        k = np.searchsorted(sx, rx)
        while k < m and sx[k] == rx:
            j = order[k]
            if by[j] == (p - ry) % p and base + j <= width:
                return lo + base + j
            if by[j] == ry and base - j >= 0:
                return lo + base - j
            k += 1
    return -1


@njit(cache=True)
def _is_zero_multiple(k, x, y, a, p):
    return jac_mul(k, x, y, a, p)[2] == 0


@njit(cache=True)
def _point_order(x, y, a, p, mult):
    n = mult
    rest = mult
    q = 2
    while q * q <= rest:
        if rest % q == 0:
            while rest % q == 0:
                rest //= q
            while n % q == 0:
                if not _is_zero_multiple(n // q, x, y, a, p):
                    break
                n //= q
        q += 1
    if rest > 1:
        q = rest
        while n % q == 0:
            if not _is_zero_multiple(n // q, x, y, a, p):
                break
            n //= q
    return n


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def ap_bsgs(A, B, p):
    """a_p by order finding in the Hasse interval, using the quadratic twist to
    break ties.  Returns BSGS_FAIL if the candidates never narrow to one."""
    a0 = A % p
    b0 = B % p
    w = int(np.sqrt(4.0 * p))
    while w * w > 4 * p:
        w -= 1
    while (w + 1) * (w + 1) <= 4 * p:
        w += 1
    lo = p + 1 - w
    hi = p + 1 + w
    width = hi - lo
    m1 = 1
    m2 = 1
    state = np.uint64(p) * np.uint64(0x9E3779B97F4A7C15) + np.uint64(1)
    for _ in range(64):
        state ^= state << np.uint64(13)
        state ^= state >> np.uint64(7)
        state ^= state << np.uint64(17)
        x = np.int64(state % np.uint64(p))
        d = ((x * x) % p * x + a0 * x + b0) % p
        if d == 0:
            continue
        d2 = (d * d) % p
        aa = (a0 * d2) % p
        px = (x * d) % p
        py = d2
        if powmod(d, (p - 1) // 2, p) == 1:
            mult = _multiple_in_window(px, py, aa, p, lo, width)
            if mult < 0:
                return BSGS_FAIL
            o = _point_order(px, py, aa, p, mult)
            m1 = m1 // _gcd(m1, o) * o
        else:
            tlo = 2 * p + 2 - hi
            mult = _multiple_in_window(px, py, aa, p, tlo, width)
            if mult < 0:
                return BSGS_FAIL
            o = _point_order(px, py, aa, p, mult)
            m2 = m2 // _gcd(m2, o) * o
        found = 0
        last = 0
        start = ((lo + m1 - 1) // m1) * m1
        for n in range(start, hi + 1, m1):
            if (2 * p + 2 - n) % m2 == 0:
                found += 1
                last = n
                if found > 1:
                    break
        if found == 1:
            return p + 1 - last
    return BSGS_FAIL


@njit(cache=True)
def ap_short_auto(A, B, p, cutoff):
    if p <= cutoff:
        return ap_naive(A, B, p)
    v = ap_bsgs(A, B, p)
    if v == BSGS_FAIL:
        return ap_naive(A, B, p)
    return v


@njit(cache=True)
def lpf_sieve(n):
    """Least prime factor table for 0..n (entries 0 and 1 are 0)."""
    lpf = np.zeros(n + 1, dtype=np.int32)
    for i in range(2, n + 1):
        if lpf[i] == 0:
            lpf[i] = i
            if i * i <= n:
                for j in range(i * i, n + 1, i):
                    if lpf[j] == 0:
                        lpf[j] = i
    return lpf


@njit(cache=True)
def fill_good_ap(A, B, n_max, lpf, ap, known, cutoff):
    """Fill ap[p] for primes 5 <= p <= n_max not flagged in known."""
    a0 = A
    b0 = B
    for p in range(5, n_max + 1):
        if lpf[p] != p or known[p]:
            continue
        ap[p] = ap_short_auto(a0, b0, p, cutoff)


@njit(cache=True)
def coefficients(n_max, lpf, ap, bad):
    """a_n for 0 <= n <= n_max from a_p at primes (ap) and bad-prime flags."""
    a = np.zeros(n_max + 1, dtype=np.int64)
    pp = np.zeros(n_max + 1, dtype=np.int64)
    if n_max >= 1:
        a[1] = 1
        pp[1] = 1
    for n in range(2, n_max + 1):
        p = lpf[n]
        m = n // p
        if m % p != 0:
            pp[n] = p
            a[n] = ap[p] * a[m]
        else:
            pk = pp[m] * p
            pp[n] = pk
            rest = n // pk
            if rest == 1:
                if bad[p]:
                    a[n] = ap[p] * a[m]
                else:
                    a[n] = ap[p] * a[m] - p * a[m // p]
            else:
                a[n] = a[pk] * a[rest]
    return a
