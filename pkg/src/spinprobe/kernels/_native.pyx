# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend: same algorithms as _pure, C loops throughout."""

import numpy as np

from libc.math cimport fabs, sqrt

BACKEND = "native"

EIGH_SWEEP_LIMIT = 60
SVD_SWEEP_LIMIT = 60
cdef double EIGH_TOL = 1e-14
cdef double SVD_TOL = 1e-14


cdef inline double _cabs(double complex z) nogil:
    cdef double x = fabs(z.real)
    cdef double y = fabs(z.imag)
    cdef double t
    if x < y:
        t = x
        x = y
        y = t
    if x == 0.0:
        return 0.0
    t = y / x
    return x * sqrt(1.0 + t * t)


cdef inline (double, double, double) _angles(double app, double aqq, double r) nogil:
    """Rotation angles for the 2x2 hermitian block; returns (c, s, t)."""
    cdef double tau = (aqq - app) / (2.0 * r)
    cdef double t
    if tau >= 0.0:
        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
    cdef double c = 1.0 / sqrt(1.0 + t * t)
    return c, t * c, t


def eigh(a_in, int sweep_limit=EIGH_SWEEP_LIMIT):
    """Cyclic Jacobi diagonalization; returns (w, v) unsorted."""
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = a_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    w_arr = np.zeros(n, dtype=np.float64)
    cdef double complex[:, ::1] a = a_arr
    cdef double complex[:, ::1] v = v_arr
    cdef double[::1] w = w_arr
    cdef Py_ssize_t p, q, k, sweep
    cdef double scale = 0.0, off, r, c, s, t, app_new, aqq_new
    cdef double complex apq, phase, tp, tq
    if n < 2:
        if n == 1:
            w[0] = a[0, 0].real
        return w_arr, v_arr
    for p in range(n):
        for q in range(n):
            scale += _cabs(a[p, q]) ** 2
    scale = sqrt(scale)
    if scale == 0.0:
        return w_arr, v_arr
    cdef double skip = 1e-18 * scale
    for sweep in range(sweep_limit):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * _cabs(a[p, q]) ** 2
        if sqrt(off) <= EIGH_TOL * scale:
            for p in range(n):
                w[p] = a[p, p].real
            return w_arr, v_arr
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = _cabs(apq)
                if r <= skip:
                    continue
                phase = apq / r
                c, s, t = _angles(a[p, p].real, a[q, q].real, r)
                app_new = a[p, p].real - t * r
                aqq_new = a[q, q].real + t * r
                for k in range(n):
                    tp = c * a[k, p] - s * phase.conjugate() * a[k, q]
                    tq = s * phase * a[k, p] + c * a[k, q]
                    a[k, p] = tp
                    a[k, q] = tq
                for k in range(n):
                    tp = c * a[p, k] - s * phase * a[q, k]
                    tq = s * phase.conjugate() * a[p, k] + c * a[q, k]
                    a[p, k] = tp
                    a[q, k] = tq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app_new
                a[q, q] = aqq_new
                for k in range(n):
                    tp = c * v[k, p] - s * phase.conjugate() * v[k, q]
                    tq = s * phase * v[k, p] + c * v[k, q]
                    v[k, p] = tp
                    v[k, q] = tq
    raise RuntimeError("jacobi eigensolver did not converge in %d sweeps" % sweep_limit)


def lstsq(a_in, b_in, double rcond):
    """Householder QR with column pivoting; returns (x, resid, rank)."""
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    b_arr = np.array(b_in, dtype=np.complex128)
    cdef Py_ssize_t m = a_arr.shape[0]
    cdef Py_ssize_t n = a_arr.shape[1]
    x_arr = np.zeros(n, dtype=np.complex128)
    perm_arr = np.arange(n, dtype=np.intp)
    diag_arr = np.zeros(n, dtype=np.float64)
    u_arr = np.zeros(m, dtype=np.complex128)
    y_arr = np.zeros(n, dtype=np.complex128)
    cdef double complex[:, ::1] a = a_arr
    cdef double complex[::1] b = b_arr
    cdef double complex[::1] x = x_arr
    cdef double complex[::1] u = u_arr
    cdef double complex[::1] y = y_arr
    cdef Py_ssize_t[::1] perm = perm_arr
    cdef double[::1] diag = diag_arr
    cdef Py_ssize_t i, j, k, jmax, rank
    cdef double best, cn, xnorm, unorm, resid
    cdef double complex alpha, wdot, tmp
    for k in range(n):
        # pivot on the largest remaining column
        best = -1.0
        jmax = k
        for j in range(k, n):
            cn = 0.0
            for i in range(k, m):
                cn += _cabs(a[i, j]) ** 2
            if cn > best:
                best = cn
                jmax = j
        if jmax != k:
            for i in range(m):
                tmp = a[i, k]
                a[i, k] = a[i, jmax]
                a[i, jmax] = tmp
            i = perm[k]
            perm[k] = perm[jmax]
            perm[jmax] = i
        xnorm = 0.0
        for i in range(k, m):
            xnorm += _cabs(a[i, k]) ** 2
        xnorm = sqrt(xnorm)
        diag[k] = xnorm
        if xnorm == 0.0:
            continue
        if a[k, k] == 0.0:
            alpha = -xnorm
        else:
            alpha = -(a[k, k] / _cabs(a[k, k])) * xnorm
        unorm = 0.0
        for i in range(k, m):
            u[i] = a[i, k]
        u[k] = u[k] - alpha
        for i in range(k, m):
            unorm += _cabs(u[i]) ** 2
        unorm = sqrt(unorm)
        if unorm != 0.0:
            for i in range(k, m):
                u[i] = u[i] / unorm
            for j in range(k, n):
                wdot = 0.0
                for i in range(k, m):
                    wdot += u[i].conjugate() * a[i, j]
                for i in range(k, m):
                    a[i, j] = a[i, j] - 2.0 * wdot * u[i]
            wdot = 0.0
            for i in range(k, m):
                wdot += u[i].conjugate() * b[i]
            for i in range(k, m):
                b[i] = b[i] - 2.0 * wdot * u[i]
        a[k, k] = alpha
        for i in range(k + 1, m):
            a[i, k] = 0.0
        diag[k] = _cabs(alpha)
    rank = n
    for k in range(n):
        if diag[k] <= rcond * diag[0]:
            rank = k
            break
    if rank < n:
        return x_arr, float("nan"), int(rank)
    for k in range(n - 1, -1, -1):
        tmp = b[k]
        for j in range(k + 1, n):
            tmp = tmp - a[k, j] * y[j]
        y[k] = tmp / a[k, k]
    for k in range(n):
        x[perm[k]] = y[k]
    resid = 0.0
    for i in range(n, m):
        resid += _cabs(b[i]) ** 2
    return x_arr, sqrt(resid), int(n)


def svdvals(a_in, int sweep_limit=SVD_SWEEP_LIMIT):
    """One-sided Jacobi singular values; returns column norms unsorted."""
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    if a_arr.shape[0] < a_arr.shape[1]:
        a_arr = np.ascontiguousarray(a_arr.T)
    cdef Py_ssize_t m = a_arr.shape[0]
    cdef Py_ssize_t n = a_arr.shape[1]
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double complex[:, ::1] a = a_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, k, sweep
    cdef double ni, nj, big, frozen, r, c, s, t
    cdef double complex aij, phase, ti, tj
    cdef bint done
    if n == 0:
        return out_arr
    if n == 1:
        ni = 0.0
        for k in range(m):
            ni += _cabs(a[k, 0]) ** 2
        out[0] = sqrt(ni)
        return out_arr
    for sweep in range(sweep_limit):
        big = 0.0
        for j in range(n):
            nj = 0.0
            for k in range(m):
                nj += _cabs(a[k, j]) ** 2
            nj = sqrt(nj)
            if nj > big:
                big = nj
        if big == 0.0:
            return out_arr
        frozen = 1e-15 * big
        done = True
        for i in range(n - 1):
            for j in range(i + 1, n):
                ni = 0.0
                nj = 0.0
                aij = 0.0
                for k in range(m):
                    ni += _cabs(a[k, i]) ** 2
                    nj += _cabs(a[k, j]) ** 2
                    aij += a[k, i].conjugate() * a[k, j]
                ni = sqrt(ni)
                nj = sqrt(nj)
                if ni <= frozen or nj <= frozen:
                    continue
                r = _cabs(aij)
                if r <= SVD_TOL * ni * nj:
                    continue
                done = False
                phase = aij / r
                c, s, t = _angles(ni * ni, nj * nj, r)
                for k in range(m):
                    ti = c * a[k, i] - s * phase.conjugate() * a[k, j]
                    tj = s * phase * a[k, i] + c * a[k, j]
                    a[k, i] = ti
                    a[k, j] = tj
        if done:
            for j in range(n):
                nj = 0.0
                for k in range(m):
                    nj += _cabs(a[k, j]) ** 2
                out[j] = sqrt(nj)
            return out_arr
    raise RuntimeError("one-sided jacobi svd did not converge in %d sweeps" % sweep_limit)
