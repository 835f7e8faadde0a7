"""Steady states of trace-preserving generators.

The kernel of the generator is found by least squares on the generator
stacked with one trace row, both scaled to unit size so the solve is
insensitive to the overall rate scale. Rank comes out of the pivoted QR
for free; a degenerate kernel is reported as non-ergodicity with the
null dimension measured by singular values.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NonErgodicError, NumericalFailureError, PositivityError, RankDeficiencyError

# singular values below this fraction of the largest count as null directions
NULL_SINGULAR_FACTOR = 1e-10
# most negative steady-state eigenvalue tolerated before failing
POSITIVITY_FLOOR = -1e-10
# steady-state defect ||L vec(rho)|| allowed, relative to ||L||
RESIDUAL_FACTOR = 1e-10


@dataclass(frozen=True)
class SteadyState:
    """Unit-trace hermitian steady state plus solve diagnostics."""

    rho: np.ndarray
    residual: float        # ||L vec(rho)||_2, unscaled
    min_eigenvalue: float
    null_dim: int          # kernel dimension of the generator


@dataclass(frozen=True)
class UniquenessReport:
    """Kernel dimension of the generator and the spectral gap above it."""

    null_dim: int
    gap: float             # second-smallest singular value of the generator


def steady_state(liou, tol=linalg.DEFAULT_TOL):
    """Solve L vec(rho) = 0 with tr(rho) = 1.

    Returns a SteadyState with rho hermitized and trace pinned to one.
    A degenerate kernel raises NonErgodicError carrying the measured
    null dimension; an eigenvalue of rho below the positivity floor
    raises PositivityError.
    """
    d = liou.dim
    lmat = np.asarray(liou.matrix, dtype=np.complex128)
    scale = float(np.linalg.norm(lmat))
    if scale == 0.0:
        raise NonErgodicError(
            "zero generator: every state is stationary", null_dim=d * d
        )
    trace_row = np.zeros(d * d, dtype=np.complex128)
    trace_row[:: d + 1] = 1.0 / np.sqrt(d)
    a = np.vstack([lmat / scale, trace_row])
    b = np.zeros(d * d + 1, dtype=np.complex128)
    b[-1] = 1.0 / np.sqrt(d)
    try:
        x, _ = linalg.solve_stacked_least_squares(a, b, tol)
    except RankDeficiencyError:
        report = uniqueness_report(liou)
        raise NonErgodicError(
            "generator kernel has dimension %d; steady state is not unique"
            % report.null_dim,
            null_dim=report.null_dim,
        ) from None
    rho = x.reshape((d, d), order="F")
    rho = 0.5 * (rho + rho.conj().T)
    tr = float(rho.trace().real)
    if abs(tr - 1.0) > 0.1:
        raise NumericalFailureError("steady-state trace came out as %.6f" % tr)
    rho /= tr
    residual = float(np.linalg.norm(lmat @ rho.reshape(-1, order="F")))
    if residual > RESIDUAL_FACTOR * scale:
        raise NumericalFailureError(
            "steady-state residual %.3e exceeds %.3e" % (residual, RESIDUAL_FACTOR * scale)
        )
    eig = linalg.hermitian_eigensystem(rho, tol)
    min_eig = float(eig.values[0])
    if min_eig < POSITIVITY_FLOOR:
        raise PositivityError(
            "steady state has eigenvalue %.3e below the positivity floor" % min_eig
        )
    rho.setflags(write=False)
    # the trace functional guarantees a kernel dimension of at least one;
    # a full-rank stacked solve rules out two or more
    return SteadyState(rho=rho, residual=residual, min_eigenvalue=min_eig, null_dim=1)


def uniqueness_report(liou):
    """Null dimension and spectral gap of the generator from its singular values."""
    s = linalg.singular_values(liou.matrix)
    if s[0] == 0.0:
        return UniquenessReport(null_dim=s.size, gap=0.0)
    null_dim = int(np.sum(s < NULL_SINGULAR_FACTOR * s[0]))
    gap = float(s[-2]) if s.size > 1 else 0.0
    return UniquenessReport(null_dim=null_dim, gap=gap)
