"""Dense linear algebra with fixed conventions.

Eigensystems come back ascending with a deterministic phase (first
significant component of each vector made real positive). Least squares
go through column-pivoted QR so rank problems surface as errors instead
of garbage solutions. All tolerances live in one record.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    ContractViolationError,
    DomainError,
    NumericalFailureError,
    RankDeficiencyError,
)


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the package."""

    hermiticity: float = 1e-12       # x largest |entry|, input symmetry check
    eig_residual: float = 1e-10      # x ||M||, guaranteed by the eigensolver
    lstsq_rcond: float = 1e-12       # x leading R diagonal, rank cutoff
    degenerate_gap: float = 1e-9     # x spectral range, eigenvalue clustering
    phase_floor: float = 1e-9        # x max |component|, "first nonzero" test
    cubic_discriminant: float = 1e-12
    cubic_residual: float = 1e-9     # x max coefficient magnitude


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and matching orthonormal column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def _as_square_complex(m, name):
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolationError("%s must be a square matrix, got shape %s" % (name, a.shape))
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ContractViolationError("%s contains non-finite entries" % name)
    return a


def require_hermitian(m, name="matrix", tol=DEFAULT_TOL):
    """Validate hermiticity to within tol.hermiticity of the largest entry."""
    a = _as_square_complex(m, name)
    top = np.max(np.abs(a)) if a.size else 0.0
    defect = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if defect > tol.hermiticity * top:
        raise ContractViolationError(
            "%s is not hermitian: defect %.3e exceeds %.3e" % (name, defect, tol.hermiticity * top)
        )
    return a


def hermitian_eigensystem(m, tol=DEFAULT_TOL):
    """Full eigensystem of a hermitian matrix, ascending, phase fixed.

    Degenerate clusters (gap below tol.degenerate_gap x spectral range) are
    re-orthonormalized so downstream projector sums are stable. Each vector
    is scaled so its first component above tol.phase_floor x max|component|
    is real positive.
    """
    a = require_hermitian(m, "eigensystem input", tol)
    a = 0.5 * (a + a.conj().T)
    try:
        w, v = kernels.eigh(a)
    except RuntimeError as exc:
        raise NumericalFailureError(str(exc)) from exc
    order = np.argsort(w, kind="stable")
    w = np.ascontiguousarray(w[order])
    v = np.ascontiguousarray(v[:, order])
    n = w.shape[0]
    if n > 1:
        gap_tol = tol.degenerate_gap * max(w[-1] - w[0], 0.0)
        start = 0
        for i in range(1, n + 1):
            if i == n or w[i] - w[i - 1] > gap_tol:
                if i - start > 1:
                    _orthonormalize(v, start, i)
                start = i
    for j in range(n):
        col = v[:, j]
        mags = np.abs(col)
        top = mags.max()
        if top == 0.0:
            continue
        idx = int(np.argmax(mags > tol.phase_floor * top))
        z = col[idx]
        col *= z.conjugate() / abs(z)
    w.setflags(write=False)
    v.setflags(write=False)
    return EigenSystem(values=w, vectors=v)


def _orthonormalize(v, lo, hi):
    """Modified Gram-Schmidt on columns lo..hi-1 in place."""
    for i in range(lo, hi):
        for j in range(lo, i):
            v[:, i] -= v[:, j] * np.vdot(v[:, j], v[:, i])
        nrm = np.linalg.norm(v[:, i])
        if nrm == 0.0:
            raise NumericalFailureError("degenerate cluster collapsed during re-orthonormalization")
        v[:, i] /= nrm


REFINEMENT_PASSES = 4


def solve_stacked_least_squares(a, b, tol=DEFAULT_TOL):
    """Least-squares solve of an m x n system with m >= n.

    Returns (x, residual). Rank deficiency below tol.lstsq_rcond of the
    leading pivot raises RankDeficiencyError carrying the numerical rank.

    The factorization solve is followed by mixed-precision iterative
    refinement: residuals and the accumulated solution are held in the
    platform's widest complex float while each correction is solved in
    working precision. Accumulating in extended precision matters because
    a solution stored in float64 is already pinned to its quantization
    floor, so single-precision-residual refinement stalls at a residual of
    order eps(float64) * ||a|| * ||x||. For a consistent system the loop
    instead converges to a few ulps of the extended type, which the
    steady-state energy balance depends on. On platforms whose long double
    is plain double this degrades gracefully to ordinary refinement.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2:
        raise ContractViolationError("system matrix must be 2-d, got %d-d" % a.ndim)
    m, n = a.shape
    if m < n:
        raise ContractViolationError("system must have at least as many rows as columns")
    if b.shape != (m,):
        raise ContractViolationError("right-hand side has shape %s, expected (%d,)" % (b.shape, m))
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))
            and np.all(np.isfinite(b.real)) and np.all(np.isfinite(b.imag))):
        raise ContractViolationError("least-squares input contains non-finite entries")
    x, resid, rank = kernels.lstsq(a, b, tol.lstsq_rcond)
    if rank < n:
        raise RankDeficiencyError(
            "least-squares system is rank deficient: rank %d of %d" % (rank, n), rank=rank
        )
    a_ext = a.astype(np.clongdouble)
    b_ext = b.astype(np.clongdouble)
    x_ext = x.astype(np.clongdouble)
    best = x_ext
    best_norm = float(np.linalg.norm((b_ext - a_ext @ x_ext).astype(np.complex128)))
    for _ in range(REFINEMENT_PASSES):
        residual_vec = (b_ext - a_ext @ x_ext).astype(np.complex128)
        correction, _, corr_rank = kernels.lstsq(a, residual_vec, tol.lstsq_rcond)
        if corr_rank < n:
            break
        x_ext = x_ext + correction.astype(np.clongdouble)
        norm_now = float(np.linalg.norm((b_ext - a_ext @ x_ext).astype(np.complex128)))
        if norm_now < best_norm:
            best = x_ext.copy()
            best_norm = norm_now
        else:
            break
    x = best.astype(np.complex128)
    final = float(np.linalg.norm((b_ext - a_ext @ x.astype(np.clongdouble)).astype(np.complex128)))
    return x, final


def singular_values(a):
    """All singular values of a matrix, descending."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ContractViolationError("singular_values expects a 2-d array")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ContractViolationError("singular_values input contains non-finite entries")
    try:
        s = kernels.svdvals(a)
    except RuntimeError as exc:
        raise NumericalFailureError(str(exc)) from exc
    return np.sort(s)[::-1].copy()


def real_cubic_roots(c2, c1, c0, tol=DEFAULT_TOL):
    """Ascending real roots of x^3 + c2 x^2 + c1 x + c0.

    Requires all three roots real: a negative discriminant beyond
    tolerance raises DomainError. Roots are polished by two Newton steps
    and satisfy |p(root)| <= tol.cubic_residual x max coefficient scale.
    """
    coeffs = np.array([c2, c1, c0], dtype=np.float64)
    if not np.all(np.isfinite(coeffs)):
        raise ContractViolationError("cubic coefficients must be finite")
    c2, c1, c0 = coeffs
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2 ** 3 / 27.0 - c2 * c1 / 3.0 + c0
    disc = -4.0 * p ** 3 - 27.0 * q * q
    dscale = max(4.0 * abs(p) ** 3, 27.0 * q * q, 1e-300)
    if disc < -tol.cubic_discriminant * dscale:
        raise DomainError("cubic has a complex conjugate pair (discriminant %.3e)" % disc)
    if p >= 0.0:
        # discriminant >= 0 with p >= 0 only happens at a (near) triple root
        t = np.full(3, np.cbrt(-q))
    else:
        mm = 2.0 * np.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * mm)
        arg = min(1.0, max(-1.0, arg))
        theta = np.arccos(arg) / 3.0
        t = mm * np.cos(theta - 2.0 * np.pi * np.arange(3) / 3.0)
    roots = t - c2 / 3.0
    for _ in range(2):
        f = ((roots + c2) * roots + c1) * roots + c0
        fp = (3.0 * roots + 2.0 * c2) * roots + c1
        step = np.where(np.abs(fp) > 0.0, f / np.where(fp == 0.0, 1.0, fp), 0.0)
        roots = roots - step
    roots = np.sort(roots)
    cscale = max(1.0, np.max(np.abs(coeffs)))
    resid = np.abs(((roots + c2) * roots + c1) * roots + c0)
    if np.max(resid) > tol.cubic_residual * cscale:
        raise NumericalFailureError(
            "cubic root residual %.3e exceeds %.3e" % (np.max(resid), tol.cubic_residual * cscale)
        )
    roots.setflags(write=False)
    return roots
