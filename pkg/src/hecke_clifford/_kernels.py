"""Complex double-double array kernels.

A dd array has shape ``(4, ...)``: real high, real low, imaginary high,
imaginary low.  Elementwise arithmetic is vectorized numpy; the matrix
product and the full-pivot elimination have numba kernels with pure-numpy
fallbacks.  Set ``HECKE_CLIFFORD_NO_NUMBA=1`` to force the fallbacks.
"""
import os

import numpy as np

try:
    from numba import njit
    has_numba = os.environ.get("HECKE_CLIFFORD_NO_NUMBA", "") not in ("1", "true", "yes")
except ImportError:  # pragma: no cover
    has_numba = False

SPLITTER = 134217729.0  # 2^27 + 1


# ---------------------------------------------------------------- numpy layer

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s1, s2 = _two_sum(ah, bh)
    t1, t2 = _two_sum(al, bl)
    s2 = s2 + t1
    s1, s2 = _quick_two_sum(s1, s2)
    s2 = s2 + t2
    return _quick_two_sum(s1, s2)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return _quick_two_sum(p, e)


def add(a, b):
    rh, rl = _dd_add(a[0], a[1], b[0], b[1])
    ih, il = _dd_add(a[2], a[3], b[2], b[3])
    return np.stack([rh, rl, ih, il])


def neg(a):
    return -a


def sub(a, b):
    return add(a, -b)


def mul(a, b):
    """Elementwise complex product (with numpy broadcasting)."""
    rr = _dd_mul(a[0], a[1], b[0], b[1])
    ii = _dd_mul(a[2], a[3], b[2], b[3])
    ri = _dd_mul(a[0], a[1], b[2], b[3])
    ir = _dd_mul(a[2], a[3], b[0], b[1])
    re = _dd_add(rr[0], rr[1], -ii[0], -ii[1])
    im = _dd_add(ri[0], ri[1], ir[0], ir[1])
    return np.stack([re[0], re[1], im[0], im[1]])


def _dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = _dd_mul(q1, 0.0 * q1, bh, bl)
    rh, rl = _dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = _dd_mul(q2, 0.0 * q2, bh, bl)
    rh, rl = _dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    s, e = _quick_two_sum(q1, q2)
    return _dd_add(s, e, q3, 0.0 * q3)


def reciprocal(a):
    """Elementwise 1/a."""
    nr = _dd_mul(a[0], a[1], a[0], a[1])
    ni = _dd_mul(a[2], a[3], a[2], a[3])
    nh, nl = _dd_add(nr[0], nr[1], ni[0], ni[1])
    rh, rl = _dd_div(a[0], a[1], nh, nl)
    ih, il = _dd_div(-a[2], -a[3], nh, nl)
    return np.stack([rh, rl, ih, il])


def absmax(a):
    if a.size == 0:
        return 0.0
    return float(np.max(np.hypot(a[0] + a[1], a[2] + a[3])))


def _matmul_numpy(a, b):
    """(4, n, k) x (4, k, m) -> (4, n, m) by accumulating rank-one updates."""
    n, k = a.shape[-2], a.shape[-1]
    m = b.shape[-1]
    batch = np.broadcast_shapes(a.shape[1:-2], b.shape[1:-2])
    out = np.zeros((4,) + batch + (n, m))
    for j in range(k):
        col = a[..., :, j][..., :, None]
        row = b[..., j, :][..., None, :]
        if not np.any(col) or not np.any(row):
            continue
        out = add(out, mul(col, row))
    return out


def _lu_numpy(a, rel_tol):
    a = a.copy()
    m, n = a.shape[1], a.shape[2]
    rows = np.arange(m)
    cols = np.arange(n)
    mags = np.hypot(a[0], a[2])
    scale = mags.max() if mags.size else 0.0
    pivots = []
    rank = 0
    for k in range(min(m, n)):
        sub_mag = np.hypot(a[0, k:, k:], a[2, k:, k:])
        idx = np.argmax(sub_mag)
        pr, pc = divmod(idx, n - k)
        best = sub_mag[pr, pc]
        if scale == 0.0 or best <= rel_tol * scale:
            break
        pr += k
        pc += k
        a[:, [k, pr], :] = a[:, [pr, k], :]
        rows[[k, pr]] = rows[[pr, k]]
        a[:, :, [k, pc]] = a[:, :, [pc, k]]
        cols[[k, pc]] = cols[[pc, k]]
        pivots.append(best)
        piv = a[:, k:k + 1, k:k + 1]
        factors = mul(a[:, k + 1:, k:k + 1], reciprocal(piv))
        a[:, k + 1:, k:k + 1] = factors
        a[:, k + 1:, k + 1:] = sub(a[:, k + 1:, k + 1:], mul(factors, a[:, k:k + 1, k + 1:]))
        rank += 1
    return a, rows, cols, rank, np.array(pivots)


def _solve_numpy(lu, rows, cols, rank, b):
    """Solve with the first ``rank`` pivots; b has shape (4, m, r)."""
    y = b[:, rows[:rank], :].copy()
    for i in range(rank):
        for j in range(i):
            y[:, i] = sub(y[:, i], mul(lu[:, i, j][:, None], y[:, j]))
    for i in range(rank - 1, -1, -1):
        for j in range(i + 1, rank):
            y[:, i] = sub(y[:, i], mul(lu[:, i, j][:, None], y[:, j]))
        y[:, i] = mul(y[:, i], reciprocal(lu[:, i, i][:, None]))
    x = np.zeros((4, lu.shape[2], b.shape[2]))
    x[:, cols[:rank], :] = y
    return x


# ---------------------------------------------------------------- numba layer

if has_numba:
    @njit(cache=True, inline="always")
    def _nb_two_sum(a, b):
        s = a + b
        bb = s - a
        return s, (a - (s - bb)) + (b - bb)

    @njit(cache=True, inline="always")
    def _nb_quick(a, b):
        s = a + b
        return s, b - (s - a)

    @njit(cache=True, inline="always")
    def _nb_two_prod(a, b):
        p = a * b
        c = SPLITTER * a
        ah = c - (c - a)
        al = a - ah
        c = SPLITTER * b
        bh = c - (c - b)
        bl = b - bh
        return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl

    @njit(cache=True, inline="always")
    def _nb_add(ah, al, bh, bl):
        s1, s2 = _nb_two_sum(ah, bh)
        t1, t2 = _nb_two_sum(al, bl)
        s2 += t1
        s1, s2 = _nb_quick(s1, s2)
        s2 += t2
        return _nb_quick(s1, s2)

    @njit(cache=True, inline="always")
    def _nb_mul(ah, al, bh, bl):
        p, e = _nb_two_prod(ah, bh)
        e += ah * bl + al * bh
        return _nb_quick(p, e)

    @njit(cache=True, inline="always")
    def _nb_cmul(a0, a1, a2, a3, b0, b1, b2, b3):
        rrh, rrl = _nb_mul(a0, a1, b0, b1)
        iih, iil = _nb_mul(a2, a3, b2, b3)
        rih, ril = _nb_mul(a0, a1, b2, b3)
        irh, irl = _nb_mul(a2, a3, b0, b1)
        reh, rel = _nb_add(rrh, rrl, -iih, -iil)
        imh, iml = _nb_add(rih, ril, irh, irl)
        return reh, rel, imh, iml

    @njit(cache=True, inline="always")
    def _nb_div(ah, al, bh, bl):
        q1 = ah / bh
        ph, pl = _nb_mul(q1, 0.0, bh, bl)
        rh, rl = _nb_add(ah, al, -ph, -pl)
        q2 = rh / bh
        ph, pl = _nb_mul(q2, 0.0, bh, bl)
        rh, rl = _nb_add(rh, rl, -ph, -pl)
        q3 = rh / bh
        s, e = _nb_quick(q1, q2)
        return _nb_add(s, e, q3, 0.0)

    @njit(cache=True, inline="always")
    def _nb_crecip(a0, a1, a2, a3):
        nrh, nrl = _nb_mul(a0, a1, a0, a1)
        nih, nil = _nb_mul(a2, a3, a2, a3)
        nh, nl = _nb_add(nrh, nrl, nih, nil)
        rh, rl = _nb_div(a0, a1, nh, nl)
        ih, il = _nb_div(-a2, -a3, nh, nl)
        return rh, rl, ih, il

    @njit(cache=True)
    def _nb_matmul_batch(a, b):
        """a: (4, B, n, k), b: (4, B, k, m)."""
        nb = a.shape[1]
        n = a.shape[2]
        k = a.shape[3]
        m = b.shape[3]
        out = np.zeros((4, nb, n, m))
        for t in range(nb):
            for i in range(n):
                for j in range(k):
                    x0 = a[0, t, i, j]
                    x1 = a[1, t, i, j]
                    x2 = a[2, t, i, j]
                    x3 = a[3, t, i, j]
                    if x0 == 0.0 and x2 == 0.0:
                        continue
                    for c in range(m):
                        y0 = b[0, t, j, c]
                        y2 = b[2, t, j, c]
                        if y0 == 0.0 and y2 == 0.0:
                            continue
                        p0, p1, p2, p3 = _nb_cmul(x0, x1, x2, x3, y0, b[1, t, j, c], y2, b[3, t, j, c])
                        h, l = _nb_add(out[0, t, i, c], out[1, t, i, c], p0, p1)
                        out[0, t, i, c] = h
                        out[1, t, i, c] = l
                        h, l = _nb_add(out[2, t, i, c], out[3, t, i, c], p2, p3)
                        out[2, t, i, c] = h
                        out[3, t, i, c] = l
        return out

    @njit(cache=True)
    def _nb_lu(a, rel_tol):
        m = a.shape[1]
        n = a.shape[2]
        rows = np.arange(m)
        cols = np.arange(n)
        pivots = np.zeros(min(m, n))
        scale = 0.0
        for i in range(m):
            for j in range(n):
                v = np.hypot(a[0, i, j], a[2, i, j])
                if v > scale:
                    scale = v
        rank = 0
        for k in range(min(m, n)):
            best = -1.0
            pr = k
            pc = k
            for i in range(k, m):
                for j in range(k, n):
                    v = np.hypot(a[0, i, j], a[2, i, j])
                    if v > best:
                        best = v
                        pr = i
                        pc = j
            if scale == 0.0 or best <= rel_tol * scale:
                break
            if pr != k:
                for c in range(4):
                    for j in range(n):
                        tmp = a[c, k, j]
                        a[c, k, j] = a[c, pr, j]
                        a[c, pr, j] = tmp
                tmpi = rows[k]
                rows[k] = rows[pr]
                rows[pr] = tmpi
            if pc != k:
                for c in range(4):
                    for i in range(m):
                        tmp = a[c, i, k]
                        a[c, i, k] = a[c, i, pc]
                        a[c, i, pc] = tmp
                tmpi = cols[k]
                cols[k] = cols[pc]
                cols[pc] = tmpi
            pivots[k] = best
            r0, r1, r2, r3 = _nb_crecip(a[0, k, k], a[1, k, k], a[2, k, k], a[3, k, k])
            for i in range(k + 1, m):
                if a[0, i, k] == 0.0 and a[2, i, k] == 0.0 and a[1, i, k] == 0.0 and a[3, i, k] == 0.0:
                    continue
                f0, f1, f2, f3 = _nb_cmul(a[0, i, k], a[1, i, k], a[2, i, k], a[3, i, k], r0, r1, r2, r3)
                a[0, i, k] = f0
                a[1, i, k] = f1
                a[2, i, k] = f2
                a[3, i, k] = f3
                for j in range(k + 1, n):
                    u0 = a[0, k, j]
                    u2 = a[2, k, j]
                    if u0 == 0.0 and u2 == 0.0 and a[1, k, j] == 0.0 and a[3, k, j] == 0.0:
                        continue
                    p0, p1, p2, p3 = _nb_cmul(f0, f1, f2, f3, u0, a[1, k, j], u2, a[3, k, j])
                    h, l = _nb_add(a[0, i, j], a[1, i, j], -p0, -p1)
                    a[0, i, j] = h
                    a[1, i, j] = l
                    h, l = _nb_add(a[2, i, j], a[3, i, j], -p2, -p3)
                    a[2, i, j] = h
                    a[3, i, j] = l
            rank += 1
        return a, rows, cols, rank, pivots[:rank]

    @njit(cache=True)
    def _nb_solve(lu, rows, cols, rank, b):
        nr = b.shape[2]
        y = np.zeros((4, rank, nr))
        for i in range(rank):
            for c in range(4):
                for r in range(nr):
                    y[c, i, r] = b[c, rows[i], r]
        for i in range(rank):
            for j in range(i):
                l0 = lu[0, i, j]
                l2 = lu[2, i, j]
                if l0 == 0.0 and l2 == 0.0:
                    continue
                for r in range(nr):
                    p0, p1, p2, p3 = _nb_cmul(l0, lu[1, i, j], l2, lu[3, i, j],
                                               y[0, j, r], y[1, j, r], y[2, j, r], y[3, j, r])
                    h, l = _nb_add(y[0, i, r], y[1, i, r], -p0, -p1)
                    y[0, i, r] = h
                    y[1, i, r] = l
                    h, l = _nb_add(y[2, i, r], y[3, i, r], -p2, -p3)
                    y[2, i, r] = h
                    y[3, i, r] = l
        for i in range(rank - 1, -1, -1):
            for j in range(i + 1, rank):
                u0 = lu[0, i, j]
                u2 = lu[2, i, j]
                if u0 == 0.0 and u2 == 0.0:
                    continue
                for r in range(nr):
                    p0, p1, p2, p3 = _nb_cmul(u0, lu[1, i, j], u2, lu[3, i, j],
                                               y[0, j, r], y[1, j, r], y[2, j, r], y[3, j, r])
                    h, l = _nb_add(y[0, i, r], y[1, i, r], -p0, -p1)
                    y[0, i, r] = h
                    y[1, i, r] = l
                    h, l = _nb_add(y[2, i, r], y[3, i, r], -p2, -p3)
                    y[2, i, r] = h
                    y[3, i, r] = l
            r0, r1, r2, r3 = _nb_crecip(lu[0, i, i], lu[1, i, i], lu[2, i, i], lu[3, i, i])
            for r in range(nr):
                p0, p1, p2, p3 = _nb_cmul(y[0, i, r], y[1, i, r], y[2, i, r], y[3, i, r], r0, r1, r2, r3)
                y[0, i, r] = p0
                y[1, i, r] = p1
                y[2, i, r] = p2
                y[3, i, r] = p3
        x = np.zeros((4, lu.shape[2], nr))
        for i in range(rank):
            for c in range(4):
                for r in range(nr):
                    x[c, cols[i], r] = y[c, i, r]
        return x


# ---------------------------------------------------------------- dispatch

def matmul(a, b):
    """Matrix product of dd arrays of shape (4, ..., n, k) and (4, ..., k, m)."""
    if not has_numba:
        return _matmul_numpy(a, b)
    batch = np.broadcast_shapes(a.shape[1:-2], b.shape[1:-2])
    n, k, m = a.shape[-2], a.shape[-1], b.shape[-1]
    aa = np.ascontiguousarray(np.broadcast_to(a, (4,) + batch + (n, k))).reshape(4, -1, n, k)
    bb = np.ascontiguousarray(np.broadcast_to(b, (4,) + batch + (k, m))).reshape(4, -1, k, m)
    out = _nb_matmul_batch(aa, bb)
    return out.reshape((4,) + batch + (n, m))


def lu_full(a, rel_tol=1e-20):
    """Full-pivot elimination of a (4, m, n) array.

    Returns (lu, row_order, col_order, rank, pivot_magnitudes).
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    if has_numba:
        return _nb_lu(a.copy(), rel_tol)
    return _lu_numpy(a, rel_tol)


def lu_solve(lu, rows, cols, rank, b):
    """Solve A x = b using the leading ``rank`` pivots of ``lu_full(A)``."""
    b = np.ascontiguousarray(b, dtype=np.float64)
    if has_numba:
        return _nb_solve(lu, rows, cols, rank, b)
    return _solve_numpy(lu, rows, cols, rank, b)


def from_complex(z):
    """dd array from a complex128 array (low parts zero)."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros((4,) + z.shape)
    out[0] = z.real
    out[2] = z.imag
    return out


def to_complex(a):
    return (a[0] + a[1]) + 1j * (a[2] + a[3])
