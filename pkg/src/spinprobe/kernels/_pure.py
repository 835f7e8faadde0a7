"""Pure-python kernel backend.

Same three algorithms as the compiled backend (cyclic Jacobi eigensolver,
Householder QR with column pivoting, one-sided Jacobi singular values),
written with numpy vector operations so the fallback stays usable.
"""

import numpy as np

BACKEND = "pure"

EIGH_SWEEP_LIMIT = 60
SVD_SWEEP_LIMIT = 60
EIGH_TOL = 1e-14
SVD_TOL = 1e-14


def _rotation(app, aqq, apq):
    """Unitary 2x2 rotation annihilating the off-diagonal entry apq.

    Returns (c, s, phase, t) with c real >= 1/sqrt(2), s real, |phase| = 1,
    and t = tan(theta) so the new diagonal is (app - t|apq|, aqq + t|apq|).
    """
    r = abs(apq)
    phase = apq / r
    tau = (aqq - app) / (2.0 * r)
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c, phase, t


def eigh(a, sweep_limit=EIGH_SWEEP_LIMIT):
    """Cyclic Jacobi diagonalization of a hermitian matrix.

    Returns (w, v) with w the real diagonal after convergence (unsorted)
    and v the accumulated unitary, columns matching w. Raises RuntimeError
    if the off-diagonal norm has not converged within sweep_limit sweeps.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n < 2:
        return a.real.diagonal().copy(), v
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    skip = 1e-18 * scale
    for _ in range(sweep_limit):
        off = np.sqrt(np.sum(np.abs(a - np.diag(a.diagonal())) ** 2))
        if off <= EIGH_TOL * scale:
            return a.real.diagonal().copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                c, s, phase, t = _rotation(a[p, p].real, a[q, q].real, apq)
                app_new = a[p, p].real - t * r
                aqq_new = a[q, q].real + t * r
                # A <- G+ A G applied as column then row updates
                col_p = c * a[:, p] - s * np.conj(phase) * a[:, q]
                col_q = s * phase * a[:, p] + c * a[:, q]
                a[:, p] = col_p
                a[:, q] = col_q
                row_p = c * a[p, :] - s * phase * a[q, :]
                row_q = s * np.conj(phase) * a[p, :] + c * a[q, :]
                a[p, :] = row_p
                a[q, :] = row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app_new
                a[q, q] = aqq_new
                col_p = c * v[:, p] - s * np.conj(phase) * v[:, q]
                col_q = s * phase * v[:, p] + c * v[:, q]
                v[:, p] = col_p
                v[:, q] = col_q
    raise RuntimeError("jacobi eigensolver did not converge in %d sweeps" % sweep_limit)


def lstsq(a, b, rcond):
    """Least squares via Householder QR with column pivoting.

    a is m x n with m >= n, b length m. Returns (x, resid, rank) where
    resid is the 2-norm of the residual. When rank < n no solution is
    computed and x is all zeros; the caller decides how to fail.
    """
    a = np.array(a, dtype=np.complex128)
    b = np.array(b, dtype=np.complex128)
    m, n = a.shape
    perm = np.arange(n)
    diag = np.zeros(n)
    for k in range(n):
        norms = np.linalg.norm(a[k:, k:], axis=0)
        j = int(np.argmax(norms)) + k
        if j != k:
            a[:, [k, j]] = a[:, [j, k]]
            perm[[k, j]] = perm[[j, k]]
        x = a[k:, k]
        xnorm = np.linalg.norm(x)
        diag[k] = xnorm
        if xnorm == 0.0:
            continue
        # reflector v = x - alpha e1 with alpha chosen to avoid cancellation
        alpha = -xnorm if x[0] == 0.0 else -(x[0] / abs(x[0])) * xnorm
        u = x.copy()
        u[0] -= alpha
        unorm = np.linalg.norm(u)
        if unorm != 0.0:
            u /= unorm
            a[k:, k:] -= 2.0 * np.outer(u, u.conj() @ a[k:, k:])
            b[k:] -= 2.0 * u * (u.conj() @ b[k:])
        a[k, k] = alpha
        a[k + 1:, k] = 0.0
        diag[k] = abs(alpha)
    rank = n
    for k in range(n):
        if diag[k] <= rcond * diag[0]:
            rank = k
            break
    if rank < n:
        return np.zeros(n, dtype=np.complex128), float("nan"), rank
    y = np.zeros(n, dtype=np.complex128)
    for k in range(n - 1, -1, -1):
        y[k] = (b[k] - a[k, k + 1:] @ y[k + 1:]) / a[k, k]
    x = np.zeros(n, dtype=np.complex128)
    x[perm] = y
    resid = float(np.linalg.norm(b[n:])) if m > n else 0.0
    return x, resid, n


def svdvals(a, sweep_limit=SVD_SWEEP_LIMIT):
    """Singular values by one-sided Jacobi orthogonalization of columns.

    Returns the column norms after convergence, unsorted. Works on the
    transpose when m < n. Raises RuntimeError if not converged.
    """
    a = np.array(a, dtype=np.complex128)
    if a.shape[0] < a.shape[1]:
        a = a.T.copy()
    n = a.shape[1]
    if n == 0:
        return np.zeros(0)
    if n == 1:
        return np.array([np.linalg.norm(a[:, 0])])
    for _ in range(sweep_limit):
        norms = np.linalg.norm(a, axis=0)
        big = norms.max()
        if big == 0.0:
            return norms
        frozen = 1e-15 * big  # columns at roundoff level stay as they are
        done = True
        for i in range(n - 1):
            for j in range(i + 1, n):
                ni = np.linalg.norm(a[:, i])
                nj = np.linalg.norm(a[:, j])
                if ni <= frozen or nj <= frozen:
                    continue
                aij = np.vdot(a[:, i], a[:, j])
                if abs(aij) <= SVD_TOL * ni * nj:
                    continue
                done = False
                c, s, phase, _ = _rotation(ni * ni, nj * nj, aij)
                col_i = c * a[:, i] - s * np.conj(phase) * a[:, j]
                col_j = s * phase * a[:, i] + c * a[:, j]
                a[:, i] = col_i
                a[:, j] = col_j
        if done:
            return np.linalg.norm(a, axis=0)
    raise RuntimeError("one-sided jacobi svd did not converge in %d sweeps" % sweep_limit)
