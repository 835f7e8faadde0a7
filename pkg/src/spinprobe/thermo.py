"""Steady-state thermodynamics: currents, laws, probe readings, performance.

Sign convention: positive current means heat flowing from that bath into
the device. The reported sigma = -sum(q/T) is the entropy production
rate, which is nonnegative in steady state.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractViolationError,
    DomainError,
    NumericalFailureError,
    UndefinedQuantityError,
)
from .lindblad import apply_dissipator

# a state is stale when the generator moves it by more than this fraction
# of the generator norm scale (mirrors the steady-state residual bound)
STALE_FACTOR = 1e-10
# relative cutoff of the undefined-COP rule
COP_WORK_FLOOR = 1e-14


@dataclass(frozen=True)
class HeatCurrents:
    """Per-bath heat currents in units of gamma x frequency^4."""

    q_w: float
    q_h: float
    q_c: float
    sigma: float
    first_law_residual: float
    noise_floor: float  # resolution limit of the q values, same units

    def as_dict(self):
        return {"work": self.q_w, "hot": self.q_h, "cold": self.q_c}


@dataclass(frozen=True)
class ProbeReading:
    """Probe polarization bias against its local equilibrium value."""

    omega: float
    bias: float
    bias_eq: float
    t_eff: float

    @property
    def delta(self):
        return self.bias - self.bias_eq


def _rate_scale(channels):
    total = 0.0
    for ch in channels:
        wt = float(np.sum(np.abs(ch.jump) ** 2))
        total += (ch.rate_down + ch.rate_up) * wt
    return total


def heat_currents(model, channels, rho_inf):
    """Heat currents q_alpha = tr(H D_alpha(rho)) at the steady state.

    channels is the full collection over all baths. The full coherent
    hamiltonian of the model (device plus probe when present) plays the
    role of the energy observable. rho_inf must actually be stationary:
    a state the generator still moves raises a contract violation.
    """
    h = np.asarray(model.hamiltonian, dtype=np.complex128)
    rho = np.asarray(rho_inf, dtype=np.complex128)
    if rho.shape != h.shape:
        raise ContractViolationError("rho shape %s does not match model dimension %d"
                                     % (rho.shape, model.dim))
    if abs(rho.trace().real - 1.0) > 1e-10 or abs(rho.trace().imag) > 1e-10:
        raise ContractViolationError("rho must have unit trace")
    scale = _rate_scale(channels)
    if scale <= 0.0:
        raise ContractViolationError("no dissipative channels supplied")
    hnorm = float(np.linalg.norm(h))
    drho = -1j * (h @ rho - rho @ h) + apply_dissipator(channels, rho)
    drift = float(np.linalg.norm(drho))
    # lower bound on the generator norm built from its ingredients
    gen_scale = 2.0 * math.sqrt(h.shape[0]) * hnorm + 2.0 * scale
    if drift > STALE_FACTOR * gen_scale:
        raise ContractViolationError(
            "rho is not stationary: generator moves it at %.3e vs scale %.3e"
            % (drift, gen_scale)
        )
    temps = {b.label: b.temperature for b in model.baths}
    by_bath = {"work": 0.0, "hot": 0.0, "cold": 0.0}
    for label in by_bath:
        subset = [ch for ch in channels if ch.bath == label]
        if subset:
            by_bath[label] = float(np.trace(h @ apply_dissipator(subset, rho)).real)
    q_w, q_h, q_c = by_bath["work"], by_bath["hot"], by_bath["cold"]
    sigma = -sum(by_bath[lab] / temps[lab] for lab in by_bath)
    return HeatCurrents(
        q_w=q_w, q_h=q_h, q_c=q_c, sigma=sigma,
        first_law_residual=abs(q_w + q_h + q_c),
        # |sum q| = |tr(H drho)| <= ||H||_F ||drho||_F, so currents below
        # this bound are indistinguishable from the stationarity defect
        noise_floor=hnorm * drift,
    )


def flux_rate_check(currents, omega_c, omega_h):
    """Spread of the stage fluxes {q_c/w_c, q_w/w_w, -q_h/w_h}.

    Returns (max - min) / max|flux|; at most ~1e-8 for a device whose
    three contacts carry one shared energy quantum per cycle.
    """
    if not 0.0 < omega_c < omega_h:
        raise DomainError("need 0 < omega_c < omega_h")
    fluxes = (
        currents.q_c / omega_c,
        currents.q_w / (omega_h - omega_c),
        -currents.q_h / omega_h,
    )
    top = max(abs(f) for f in fluxes)
    if top == 0.0:
        return 0.0
    return (max(fluxes) - min(fluxes)) / top


def probe_reading(rho_inf, probe, temperature):
    """Probe bias from the steady state, with its equilibrium reference.

    rho_inf lives on device (x) probe with the probe index minor; the
    reduced probe state is the partial trace over the device factor.
    """
    rho = np.asarray(rho_inf, dtype=np.complex128)
    dim = rho.shape[0]
    if rho.ndim != 2 or rho.shape != (dim, dim) or dim % 2 != 0 or dim < 2:
        raise ContractViolationError("rho must be square with an even dimension")
    if not temperature > 0.0:
        raise DomainError("interface temperature must be positive")
    ddev = dim // 2
    rho_s = np.einsum("ikil->kl", rho.reshape(ddev, 2, ddev, 2))
    bias = float((rho_s[0, 0] - rho_s[1, 1]).real)
    if abs(bias) > 1.0 + 1e-10:
        raise NumericalFailureError("probe bias %.6e outside [-1, 1]" % bias)
    bias = min(1.0, max(-1.0, bias))
    omega = float(probe.omega)
    bias_eq = math.tanh(0.5 * omega / temperature)
    if bias >= 1.0:
        t_eff = 0.0
    elif bias == 0.0:
        t_eff = math.inf
    elif bias <= -1.0:
        t_eff = -0.0
    else:
        t_eff = omega / math.log((1.0 + bias) / (1.0 - bias))
    return ProbeReading(omega=omega, bias=bias, bias_eq=bias_eq, t_eff=t_eff)


def cop(currents):
    """Coefficient of performance q_c/q_w.

    Undefined when the work current is below the relative floor against
    q_c or below the solver noise floor (the reversible point).
    """
    if abs(currents.q_w) <= COP_WORK_FLOOR * abs(currents.q_c):
        raise UndefinedQuantityError(
            "cop undefined: |q_w| = %.3e below %.1e x |q_c|"
            % (abs(currents.q_w), COP_WORK_FLOOR)
        )
    if abs(currents.q_w) <= currents.noise_floor:
        raise UndefinedQuantityError(
            "cop undefined: |q_w| = %.3e within solver noise %.3e"
            % (abs(currents.q_w), currents.noise_floor)
        )
    return currents.q_c / currents.q_w


def cop_endoreversible_estimate(omega_c, omega_h):
    """COP of an endoreversible device with contacts at omega_c and
    omega_h: the frequency ratio omega_c / (omega_h - omega_c)."""
    if not 0.0 < omega_c < omega_h:
        raise DomainError("need 0 < omega_c < omega_h")
    return omega_c / (omega_h - omega_c)


def carnot_cop(t_work, t_hot, t_cold):
    """Carnot bound T_c (T_w - T_h) / [T_w (T_h - T_c)] for a chiller
    driven by three baths."""
    if not t_work > t_hot > t_cold > 0.0:
        raise DomainError("need t_work > t_hot > t_cold > 0")
    return t_cold * (t_work - t_hot) / (t_work * (t_hot - t_cold))


def filter_temperature(rho_inf, levels, omega):
    """Spin temperature of one device transition from its populations.

    levels is the (lower, upper) index pair, omega the transition
    frequency. Equal populations map to math.inf; a vanishing population
    has no temperature and raises.
    """
    rho = np.asarray(rho_inf, dtype=np.complex128)
    lo, hi = levels
    if not (0 <= lo < rho.shape[0] and 0 <= hi < rho.shape[0]) or lo == hi:
        raise ContractViolationError("invalid level pair %s" % (levels,))
    if not omega > 0.0:
        raise DomainError("transition frequency must be positive")
    p_lo = float(rho[lo, lo].real)
    p_hi = float(rho[hi, hi].real)
    if p_lo <= 0.0 or p_hi <= 0.0:
        raise UndefinedQuantityError(
            "transition %s has a vanishing population (%.3e, %.3e)" % (levels, p_lo, p_hi)
        )
    if p_lo == p_hi:
        return math.inf
    return omega / math.log(p_lo / p_hi)
