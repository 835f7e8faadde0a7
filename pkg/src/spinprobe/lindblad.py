"""Weak-coupling generators for small machines driven by thermal baths.

Each bath couples through a hermitian operator that splits into open
decay channels, one per distinct positive transition frequency of the
machine hamiltonian. Channel rates follow the cubed-frequency law of a
three-dimensional radiation field and obey detailed balance in pairs.
Superoperators use column stacking: vec(A X B) = (B^T kron A) vec(X).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ContractViolationError, DomainError

BATH_LABELS = ("work", "hot", "cold")

# frequencies closer than this fraction of the spectral range collapse
# into a single channel
GROUP_TOL_FACTOR = 1e-9
# matrix elements below this fraction of the largest coupling entry are
# treated as absent transitions
ELEMENT_DROP_FACTOR = 1e-12


def _readonly(a):
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BathSpec:
    """One thermal bath: label, temperature, base rate, coupling operator."""

    label: str
    temperature: float
    gamma: float
    coupling: np.ndarray

    def __post_init__(self):
        if self.label not in BATH_LABELS:
            raise ContractViolationError("bath label must be one of %s" % (BATH_LABELS,))
        if not (self.temperature > 0.0 and math.isfinite(self.temperature)):
            raise DomainError("bath temperature must be positive and finite")
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise DomainError("bath gamma must be positive and finite")
        c = linalg.require_hermitian(self.coupling, "coupling of bath %r" % self.label)
        object.__setattr__(self, "coupling", _readonly(c))


@dataclass(frozen=True)
class DecayChannel:
    """A single open decay channel at positive frequency omega.

    jump is the lowering eigenoperator (drops energy by omega);
    rate_down / rate_up = exp(omega / temperature) by detailed balance.
    """

    bath: str
    omega: float
    jump: np.ndarray
    rate_down: float
    rate_up: float


@dataclass(frozen=True)
class Liouvillian:
    """Column-stacked generator matrix plus the channels that built it."""

    dim: int
    matrix: np.ndarray
    channels: tuple


def rate(omega, temperature, gamma):
    """Downward and upward rates for one channel: gamma w^3 (1 + n) and its
    detailed-balance partner, with n the thermal occupation at omega."""
    if not (omega > 0.0 and math.isfinite(omega)):
        raise DomainError("channel frequency must be positive and finite")
    if not (temperature > 0.0 and math.isfinite(temperature)):
        raise DomainError("temperature must be positive and finite")
    if not (gamma > 0.0 and math.isfinite(gamma)):
        raise DomainError("gamma must be positive and finite")
    x = omega / temperature
    if x < 700.0:
        n = 1.0 / math.expm1(x)
        boltz = math.exp(-x)
    else:
        n = 0.0
        boltz = 0.0
    down = gamma * omega ** 3 * (1.0 + n)
    return down, boltz * down


def eigenoperator_decomposition(h, bath, group_tol=None):
    """Split a bath coupling into decay channels of the hamiltonian h.

    Transition frequencies within group_tol of each other merge into one
    channel (default: GROUP_TOL_FACTOR x spectral range). Returns a tuple
    of DecayChannel sorted by frequency. Diagonal coupling weight in the
    energy eigenbasis has no channel to go to and triggers a warning.
    """
    h = linalg.require_hermitian(h, "hamiltonian")
    if h.shape != bath.coupling.shape:
        raise ContractViolationError(
            "coupling shape %s does not match hamiltonian shape %s"
            % (bath.coupling.shape, h.shape)
        )
    eig = linalg.hermitian_eigensystem(h)
    w, v = eig.values, eig.vectors
    n = w.shape[0]
    span = float(w[-1] - w[0]) if n > 1 else 0.0
    if group_tol is None:
        group_tol = GROUP_TOL_FACTOR * max(span, 1e-300)
    cmat = v.conj().T @ bath.coupling @ v
    drop = ELEMENT_DROP_FACTOR * max(np.max(np.abs(cmat)), 1e-300)

    transitions = []  # (frequency, lower index, upper index)
    stuck = 0.0  # coupling weight inside (near-)degenerate sectors
    for i in range(n):
        if abs(cmat[i, i]) > drop:
            stuck = max(stuck, abs(cmat[i, i]))
        for j in range(i + 1, n):
            freq = float(w[j] - w[i])
            if abs(cmat[i, j]) <= drop:
                continue
            if freq <= group_tol:
                stuck = max(stuck, abs(cmat[i, j]))
                continue
            transitions.append((freq, i, j))
    if stuck > 0.0:
        warnings.warn(
            "bath %r couples within degenerate energy sectors (weight %.3e); "
            "pure dephasing is out of scope and this weight is discarded"
            % (bath.label, stuck),
            stacklevel=2,
        )

    transitions.sort(key=lambda rec: rec[0])
    channels = []
    k = 0
    while k < len(transitions):
        group = [transitions[k]]
        while k + 1 < len(transitions) and transitions[k + 1][0] - group[-1][0] <= group_tol:
            k += 1
            group.append(transitions[k])
        k += 1
        freq = sum(rec[0] for rec in group) / len(group)
        jump = np.zeros((n, n), dtype=np.complex128)
        for _, i, j in group:
            jump += cmat[i, j] * np.outer(v[:, i], v[:, j].conj())
        down, up = rate(freq, bath.temperature, bath.gamma)
        channels.append(
            DecayChannel(bath=bath.label, omega=freq, jump=_readonly(jump),
                         rate_down=down, rate_up=up)
        )
    return tuple(channels)


def build_liouvillian(h, channels, include_hamiltonian=True):
    """Assemble the column-stacked generator from hamiltonian and channels."""
    h = linalg.require_hermitian(h, "hamiltonian")
    d = h.shape[0]
    ident = np.eye(d, dtype=np.complex128)
    mat = np.zeros((d * d, d * d), dtype=np.complex128)
    if include_hamiltonian:
        mat += -1j * (np.kron(ident, h) - np.kron(h.T, ident))
    for ch in channels:
        a = np.asarray(ch.jump, dtype=np.complex128)
        if a.shape != (d, d):
            raise ContractViolationError(
                "channel jump shape %s does not match dimension %d" % (a.shape, d)
            )
        ada = a.conj().T @ a
        aad = a @ a.conj().T
        mat += ch.rate_down * (
            np.kron(a.conj(), a)
            - 0.5 * np.kron(ident, ada)
            - 0.5 * np.kron(ada.T, ident)
        )
        mat += ch.rate_up * (
            np.kron(a.T, a.conj().T)
            - 0.5 * np.kron(ident, aad)
            - 0.5 * np.kron(aad.T, ident)
        )
    return Liouvillian(dim=d, matrix=_readonly(mat), channels=tuple(channels))


def apply_dissipator(channels, rho):
    """Dissipative part of the generator applied to a density matrix."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ContractViolationError("rho must be a square matrix")
    out = np.zeros_like(rho)
    for ch in channels:
        a = np.asarray(ch.jump, dtype=np.complex128)
        if a.shape != rho.shape:
            raise ContractViolationError("channel dimension does not match rho")
        ada = a.conj().T @ a
        aad = a @ a.conj().T
        out += ch.rate_down * (a @ rho @ a.conj().T - 0.5 * (ada @ rho + rho @ ada))
        out += ch.rate_up * (a.conj().T @ rho @ a - 0.5 * (aad @ rho + rho @ aad))
    return out
