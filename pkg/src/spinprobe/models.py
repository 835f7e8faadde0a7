"""Concrete machines: the three-level maser and a four-level two-stage pump.

Both couple to work, hot and cold baths through single transitions. The
probe variant tensors in a two-level spin (device index major, probe
index minor), shifts it by its frequency omega, couples it to one
device transition by a flip-flop term of strength j, and adds it to
that same bath's coupling operator, so probe and device relax through
the shared bath.
"""

import math
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .errors import ContractViolationError, DomainError
from .lindblad import BATH_LABELS, BathSpec, eigenoperator_decomposition

GAMMA_DEFAULT = 1e-7

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
_NUMBER_E = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128)
_RAISE = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=np.complex128)  # |e><g|

# device transition (lower, upper) fed by each bath
_CONTACTS = {
    "maser3": {"cold": (0, 1), "work": (1, 2), "hot": (0, 2)},
    "pump4": {"cold": (0, 1), "work": (2, 3), "hot": (0, 3)},
}


@dataclass(frozen=True)
class ProbeSpec:
    """Probe frequency, coupling and which bath contact it sits on."""

    interface: str
    omega: float
    j: float
    contact: tuple


@dataclass(frozen=True)
class ModelSpec:
    """A complete machine: hamiltonian, baths, optional probe, parameters."""

    family: str
    dim: int
    device_dim: int
    hamiltonian: np.ndarray
    baths: tuple
    probe: object
    params: object


def _readonly(a):
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


def _check_common(omega_c, omega_h, t_work, t_hot, t_cold, gamma):
    vals = (omega_c, omega_h, t_work, t_hot, t_cold, gamma)
    if not all(math.isfinite(v) for v in vals):
        raise ContractViolationError("model parameters must be finite")
    if not 0.0 < omega_c < omega_h:
        raise DomainError("need 0 < omega_c < omega_h, got omega_c=%g omega_h=%g" % (omega_c, omega_h))
    if not (t_work > 0.0 and t_hot > 0.0 and t_cold > 0.0):
        raise DomainError(
            "temperatures must be positive, got %g, %g, %g" % (t_work, t_hot, t_cold)
        )
    if gamma <= 0.0:
        raise DomainError("gamma must be positive")


def _check_probe(omega, j, interface):
    if not (math.isfinite(omega) and omega > 0.0):
        raise DomainError("probe frequency must be positive and finite")
    if not (math.isfinite(j) and j > 0.0):
        raise DomainError("probe coupling j must be positive and finite")
    if interface not in BATH_LABELS:
        raise ContractViolationError("probe interface must be one of %s" % (BATH_LABELS,))


def _transition(dim, lo, hi):
    c = np.zeros((dim, dim), dtype=np.complex128)
    c[lo, hi] = 1.0
    c[hi, lo] = 1.0
    return c


def _maser3_device(omega_c, omega_h):
    h = np.diag(np.array([0.0, omega_c, omega_h], dtype=np.complex128))
    couplings = {
        label: _transition(3, *_CONTACTS["maser3"][label]) for label in BATH_LABELS
    }
    return h, couplings


def _pump4_device(omega_c, omega_h, g):
    h = np.diag(np.array([0.0, omega_c, omega_c, omega_h], dtype=np.complex128))
    h[1, 2] = g
    h[2, 1] = g
    couplings = {
        label: _transition(4, *_CONTACTS["pump4"][label]) for label in BATH_LABELS
    }
    return h, couplings


def _assemble(family, h_dev, couplings, temps, gamma, probe, params):
    ddev = h_dev.shape[0]
    if probe is not None:
        idp = np.eye(2, dtype=np.complex128)
        iddev = np.eye(ddev, dtype=np.complex128)
        lo, hi = probe.contact
        flip = np.zeros((ddev, ddev), dtype=np.complex128)
        flip[lo, hi] = 1.0  # |lo><hi| on the device
        hop = np.kron(flip, _RAISE)  # |lo,e><hi,g|
        h = (
            np.kron(h_dev, idp)
            + probe.omega * np.kron(iddev, _NUMBER_E)
            + probe.j * (hop + hop.conj().T)
        )
        couplings = {label: np.kron(c, idp) for label, c in couplings.items()}
        couplings[probe.interface] = couplings[probe.interface] + np.kron(iddev, _SIGMA_X)
        dim = 2 * ddev
    else:
        h = h_dev
        dim = ddev
    baths = tuple(
        BathSpec(label=label, temperature=temps[label], gamma=gamma, coupling=couplings[label])
        for label in BATH_LABELS
    )
    return ModelSpec(
        family=family,
        dim=dim,
        device_dim=ddev,
        hamiltonian=_readonly(h),
        baths=baths,
        probe=probe,
        params=MappingProxyType(dict(params)),
    )


def build_maser3(omega_c, omega_h, t_work, t_hot, t_cold, gamma=GAMMA_DEFAULT):
    """Bare three-level maser: transitions omega_c (cold), omega_h (hot),
    omega_h - omega_c (work)."""
    _check_common(omega_c, omega_h, t_work, t_hot, t_cold, gamma)
    h, couplings = _maser3_device(omega_c, omega_h)
    temps = {"work": t_work, "hot": t_hot, "cold": t_cold}
    params = dict(omega_c=omega_c, omega_h=omega_h, t_work=t_work, t_hot=t_hot,
                  t_cold=t_cold, gamma=gamma)
    return _assemble("maser3", h, couplings, temps, gamma, None, params)


def build_maser3_with_probe(omega_c, omega_h, t_work, t_hot, t_cold, omega, j,
                            interface="cold", gamma=GAMMA_DEFAULT):
    """Three-level maser with a two-level probe on one bath contact."""
    _check_common(omega_c, omega_h, t_work, t_hot, t_cold, gamma)
    _check_probe(omega, j, interface)
    h, couplings = _maser3_device(omega_c, omega_h)
    probe = ProbeSpec(interface=interface, omega=omega, j=j,
                      contact=_CONTACTS["maser3"][interface])
    temps = {"work": t_work, "hot": t_hot, "cold": t_cold}
    params = dict(omega_c=omega_c, omega_h=omega_h, t_work=t_work, t_hot=t_hot,
                  t_cold=t_cold, gamma=gamma, omega=omega, j=j, interface=interface)
    return _assemble("maser3", h, couplings, temps, gamma, probe, params)


def build_pump4(omega_c, omega_h, g, t_work, t_hot, t_cold, gamma=GAMMA_DEFAULT):
    """Bare four-level pump: two cold-transition levels split by the
    internal coupling g, forming two detuned stages."""
    _check_common(omega_c, omega_h, t_work, t_hot, t_cold, gamma)
    if not (math.isfinite(g) and 0.0 < g < omega_c):
        raise DomainError("need 0 < g < omega_c, got g=%g omega_c=%g" % (g, omega_c))
    h, couplings = _pump4_device(omega_c, omega_h, g)
    temps = {"work": t_work, "hot": t_hot, "cold": t_cold}
    params = dict(omega_c=omega_c, omega_h=omega_h, g=g, t_work=t_work, t_hot=t_hot,
                  t_cold=t_cold, gamma=gamma)
    return _assemble("pump4", h, couplings, temps, gamma, None, params)


def build_pump4_with_probe(omega_c, omega_h, g, t_work, t_hot, t_cold, omega, j,
                           interface="cold", gamma=GAMMA_DEFAULT):
    """Four-level pump with a two-level probe on one bath contact."""
    _check_common(omega_c, omega_h, t_work, t_hot, t_cold, gamma)
    if not (math.isfinite(g) and 0.0 < g < omega_c):
        raise DomainError("need 0 < g < omega_c, got g=%g omega_c=%g" % (g, omega_c))
    _check_probe(omega, j, interface)
    h, couplings = _pump4_device(omega_c, omega_h, g)
    probe = ProbeSpec(interface=interface, omega=omega, j=j,
                      contact=_CONTACTS["pump4"][interface])
    temps = {"work": t_work, "hot": t_hot, "cold": t_cold}
    params = dict(omega_c=omega_c, omega_h=omega_h, g=g, t_work=t_work, t_hot=t_hot,
                  t_cold=t_cold, gamma=gamma, omega=omega, j=j, interface=interface)
    return _assemble("pump4", h, couplings, temps, gamma, probe, params)


def omega_c_rev(omega_h, t_work, t_hot, t_cold):
    """Cold frequency at which all three contacts equilibrate locally and
    every current vanishes."""
    if not t_work > t_hot > t_cold > 0.0:
        raise DomainError("need t_work > t_hot > t_cold > 0")
    if not omega_h > 0.0:
        raise DomainError("omega_h must be positive")
    return omega_h * t_cold * (t_work - t_hot) / (t_hot * (t_work - t_cold))


@dataclass(frozen=True)
class ValidityCheck:
    name: str
    satisfied: bool
    ratio: float  # <= 1 means satisfied, larger means worse
    detail: str


@dataclass(frozen=True)
class ValidityReport:
    checks: tuple
    overall: bool


def validity_report(model, group_tol=None, _channels_by_bath=None):
    """Weak-coupling regime diagnostics for a model instance.

    secular: the fastest rate must stay below a tenth of the smallest
    frequency splitting between channels of the same bath. markov: the
    largest gamma must stay below a tenth of the coldest temperature.
    probe_resolution (probed models): the fastest rate must stay below
    a tenth of the probe coupling j. Callers that already hold the
    channel decomposition can pass it as a label -> channels mapping to
    skip redoing it.
    """
    max_rate = 0.0
    min_split = math.inf
    for bath in model.baths:
        if _channels_by_bath is not None:
            channels = _channels_by_bath[bath.label]
        else:
            channels = eigenoperator_decomposition(model.hamiltonian, bath, group_tol)
        if channels:
            max_rate = max(max_rate, max(ch.rate_down for ch in channels))
        freqs = sorted(ch.omega for ch in channels)
        for lo, hi in zip(freqs, freqs[1:]):
            min_split = min(min_split, hi - lo)
    checks = []
    if math.isinf(min_split):
        checks.append(ValidityCheck(
            name="secular", satisfied=True, ratio=0.0,
            detail="no bath has more than one channel",
        ))
    else:
        ratio = max_rate / (0.1 * min_split)
        checks.append(ValidityCheck(
            name="secular", satisfied=ratio <= 1.0, ratio=ratio,
            detail="max rate %.3e vs min within-bath splitting %.3e" % (max_rate, min_split),
        ))
    max_gamma = max(b.gamma for b in model.baths)
    min_temp = min(b.temperature for b in model.baths)
    ratio = max_gamma / (0.1 * min_temp)
    checks.append(ValidityCheck(
        name="markov", satisfied=ratio <= 1.0, ratio=ratio,
        detail="max gamma %.3e vs min temperature %.3e" % (max_gamma, min_temp),
    ))
    if model.probe is not None:
        ratio = max_rate / (0.1 * model.probe.j)
        checks.append(ValidityCheck(
            name="probe_resolution", satisfied=ratio <= 1.0, ratio=ratio,
            detail="max rate %.3e vs probe coupling %.3e" % (max_rate, model.probe.j),
        ))
    checks = tuple(checks)
    return ValidityReport(checks=checks, overall=all(c.satisfied for c in checks))


@dataclass(frozen=True)
class Preset:
    """Named parameter set with a default sweep grid.

    sweep is "probe" (grid spans the probe frequency) for probed presets
    and "device" (grid spans omega_c) for bare ones.
    """

    name: str
    family: str
    probed: bool
    interface: str
    sweep: str
    params: object
    grid: tuple
    note: str


_BASE = dict(omega_h=40.0, t_work=30.0, t_hot=20.0, t_cold=10.0, gamma=GAMMA_DEFAULT)


def _preset(name, family, probed, sweep, params, grid, note, interface="cold"):
    return Preset(name=name, family=family, probed=probed, interface=interface,
                  sweep=sweep, params=MappingProxyType(params), grid=grid, note=note)


PRESETS = {
    p.name: p
    for p in (
        _preset("fig2a", "maser3", True, "probe",
                dict(_BASE, omega_c=7.5, j=0.1),
                (6.5, 8.5, 401),
                "endoreversible chiller, probe on the cold contact"),
        _preset("fig2b", "maser3", True, "probe",
                dict(_BASE, omega_c=12.5, j=0.1),
                (11.5, 13.5, 401),
                "maser past the reversible point: heat transformer"),
        _preset("fig3a", "pump4", True, "probe",
                dict(_BASE, omega_c=7.5, g=0.5, j=0.1),
                (2.5, 12.5, 401),
                "strongly split two-stage chiller"),
        _preset("fig3b", "pump4", True, "probe",
                dict(_BASE, omega_c=7.5, g=0.1, j=0.1),
                (6.5, 8.5, 401),
                "weakly split two-stage chiller"),
        _preset("fig3b-j001", "pump4", True, "probe",
                dict(_BASE, omega_c=7.5, g=0.1, j=0.01),
                (6.5, 8.5, 2001),
                "weakly split two-stage chiller, soft probe"),
        _preset("fig3c", "pump4", True, "probe",
                dict(_BASE, omega_c=10.0, g=0.5, j=0.1),
                (5.0, 15.0, 401),
                "two-stage device at the reversible cold frequency"),
        _preset("maser3", "maser3", False, "device",
                dict(_BASE),
                (0.5, 9.9, 95),
                "bare maser, sweep omega_c"),
        _preset("pump4-g05", "pump4", False, "device",
                dict(_BASE, g=0.5),
                (0.5, 9.9, 95),
                "bare two-stage pump, wide stage splitting"),
        _preset("pump4-g01", "pump4", False, "device",
                dict(_BASE, g=0.1),
                (0.5, 9.9, 95),
                "bare two-stage pump, narrow stage splitting"),
    )
}


def preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise ContractViolationError(
            "unknown preset %r; known: %s" % (name, ", ".join(sorted(PRESETS)))
        ) from None


def build_preset(p, value):
    """Instantiate a preset at one sweep point (probe frequency or omega_c)."""
    if isinstance(p, str):
        p = preset(p)
    kwargs = dict(p.params)
    if p.probed:
        kwargs["omega"] = value
        kwargs["interface"] = p.interface
        if p.family == "maser3":
            return build_maser3_with_probe(**kwargs)
        return build_pump4_with_probe(**kwargs)
    kwargs["omega_c"] = value
    if p.family == "maser3":
        return build_maser3(**kwargs)
    return build_pump4(**kwargs)
