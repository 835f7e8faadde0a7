"""Black-box probe spectroscopy: sweep, detect, classify, diagnose.

A scan rebuilds the model at every probe frequency, solves for the
steady state, and records the probe's polarization bias next to its
local equilibrium value. Peaks of the deviation mark open decay
channels of the machine; their sign tells the direction of the heat
flow through the probed contact.
"""

import math
from dataclasses import dataclass, replace
from types import MappingProxyType

import numpy as np

from . import models
from .errors import ContractViolationError, SpinprobeError
from .lindblad import build_liouvillian, eigenoperator_decomposition
from .steady import steady_state
from .thermo import heat_currents, probe_reading

DELTA_DEFAULT = 1e-3

_CHILLER_SIGNS = {"cold": "absorbing", "work": "absorbing", "hot": "releasing"}
_TRANSFORMER_SIGNS = {"cold": "releasing", "work": "releasing", "hot": "absorbing"}


@dataclass(frozen=True)
class GridSpec:
    """Uniform sweep grid."""

    lo: float
    hi: float
    points: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ContractViolationError("grid needs finite lo < hi")
        if self.points < 3:
            raise ContractViolationError("grid needs at least 3 points")

    def values(self):
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class ScanConfig:
    """A preset (named or ad hoc) plus grid and detection threshold."""

    preset: models.Preset
    grid: GridSpec
    delta: float = DELTA_DEFAULT
    group_tol: float = None

    def __post_init__(self):
        if not self.preset.probed:
            raise ContractViolationError("scanning requires a probed preset")
        if not self.delta > 0.0:
            raise ContractViolationError("detection threshold must be positive")


def config_for(preset_name, interface=None, grid=None, delta=DELTA_DEFAULT, group_tol=None):
    """ScanConfig from a named preset with optional overrides."""
    p = models.preset(preset_name)
    if interface is not None:
        p = replace(p, interface=interface)
    if grid is None:
        grid = GridSpec(*p.grid)
    elif not isinstance(grid, GridSpec):
        grid = GridSpec(*grid)
    return ScanConfig(preset=p, grid=grid, delta=delta, group_tol=group_tol)


def default_grid(center, j, g=0.0, points=401):
    """Default sweep window: center +- 10 x max(j, g)."""
    half = 10.0 * max(j, g)
    return GridSpec(center - half, center + half, points)


@dataclass(frozen=True)
class ScanRow:
    """One grid point of a scan. Failed rows carry NaN observables."""

    omega: float
    bias: float
    bias_eq: float
    delta: float
    t_eff: float
    q_w: float
    q_h: float
    q_c: float
    sigma: float
    ness_residual: float
    ok: bool = True
    valid: bool = True
    note: str = ""


@dataclass(frozen=True)
class ChannelEstimate:
    """A detected decay channel: refined position plus flow direction."""

    interface: str
    frequency: float
    direction: str
    prominence: float


@dataclass(frozen=True)
class DiagnosisReport:
    """What the probe learned about the machine."""

    channels: object  # mapping interface -> tuple of ChannelEstimate
    endoreversible_consistent: bool
    operation_mode: str
    cop_estimate: object  # float or None
    irreversibility_scale: float
    internal_dissipation: bool


def _failed_row(omega, note):
    nan = float("nan")
    return ScanRow(omega=float(omega), bias=nan, bias_eq=nan, delta=nan, t_eff=nan,
                   q_w=nan, q_h=nan, q_c=nan, sigma=nan, ness_residual=nan,
                   ok=False, valid=False, note=note)


def scan(config):
    """Sweep the probe across the grid; one row per frequency, ascending.

    Each point is an independent fresh build and solve, evaluated
    sequentially in ascending order, so identical configs give
    bit-identical rows. A numerical failure marks the row and the sweep
    moves on.
    """
    rows = []
    for omega in config.grid.values():
        try:
            rows.append(_scan_point(config, float(omega)))
        except SpinprobeError as exc:
            rows.append(_failed_row(omega, "%s: %s" % (type(exc).__name__, exc)))
    return tuple(rows)


def _scan_point(config, omega):
    model = models.build_preset(config.preset, omega)
    by_bath = {
        bath.label: eigenoperator_decomposition(model.hamiltonian, bath, config.group_tol)
        for bath in model.baths
    }
    channels = tuple(ch for label in ("work", "hot", "cold") for ch in by_bath[label])
    liou = build_liouvillian(model.hamiltonian, channels)
    state = steady_state(liou)
    temperature = {b.label: b.temperature for b in model.baths}[model.probe.interface]
    reading = probe_reading(state.rho, model.probe, temperature)
    currents = heat_currents(model, channels, state.rho)
    validity = models.validity_report(model, config.group_tol, _channels_by_bath=by_bath)
    return ScanRow(
        omega=omega,
        bias=reading.bias,
        bias_eq=reading.bias_eq,
        delta=reading.delta,
        t_eff=reading.t_eff,
        q_w=currents.q_w,
        q_h=currents.q_h,
        q_c=currents.q_c,
        sigma=currents.sigma,
        ness_residual=state.residual,
        ok=True,
        valid=validity.overall,
        note="" if validity.overall else "; ".join(
            "%s: %s" % (c.name, c.detail) for c in validity.checks if not c.satisfied
        ),
    )


def detect_channels(rows, delta=DELTA_DEFAULT, interface=None):
    """Local extrema of the bias deviation with prominence >= delta.

    rows must be sorted ascending in omega; failed rows are skipped.
    Each extremum is refined by a parabola through its grid triple.
    """
    if not delta > 0.0:
        raise ContractViolationError("detection threshold must be positive")
    good = [r for r in rows if r.ok]
    omegas = [r.omega for r in good]
    if omegas != sorted(omegas):
        raise ContractViolationError("rows must be sorted by omega")
    found = []
    for k in range(1, len(good) - 1):
        y0, y1, y2 = good[k - 1].delta, good[k].delta, good[k + 1].delta
        peak = y1 >= delta and y1 > y0 and y1 >= y2
        trough = y1 <= -delta and y1 < y0 and y1 <= y2
        if not (peak or trough):
            continue
        freq = _parabolic_vertex(
            good[k - 1].omega, good[k].omega, good[k + 1].omega, y0, y1, y2
        )
        found.append(ChannelEstimate(
            interface=interface if interface is not None else "",
            frequency=freq,
            direction=classify_direction(y1, interface, delta),
            prominence=abs(y1),
        ))
    return tuple(found)


def _parabolic_vertex(x0, x1, x2, y0, y1, y2):
    """Vertex of the parabola through three points; x1 when degenerate."""
    dl = x1 - x0
    dr = x2 - x1
    num = (y0 - y1) * dr * dr - (y2 - y1) * dl * dl
    den = (y0 - y1) * dr + (y2 - y1) * dl
    if den == 0.0 or not math.isfinite(num / den):
        return x1
    shift = 0.5 * num / den
    # the vertex of a genuine extremal triple stays inside the bracket
    if abs(shift) > max(dl, dr):
        return x1
    return x1 + shift


def classify_direction(delta_value, interface=None, threshold=DELTA_DEFAULT):
    """Heat-flow direction from the sign of the bias deviation.

    A probe biased above its local equilibrium sits effectively colder
    than the bath, which happens when the machine absorbs heat through
    this contact; below means the machine releases heat here.
    """
    if math.isnan(delta_value) or abs(delta_value) < threshold:
        return "indeterminate"
    return "absorbing" if delta_value > 0.0 else "releasing"


def diagnose(scans, delta=DELTA_DEFAULT):
    """Synthesize scans at one or more interfaces into a diagnosis.

    scans maps interface label -> rows from scan(). Channel positions
    give the endoreversibility verdict, the frequency spread, and, when
    cold plus hot (or work) channels are present, a COP estimate.
    """
    if not scans:
        raise ContractViolationError("diagnose needs at least one scan")
    channels = {}
    for interface, rows in scans.items():
        if interface not in ("work", "hot", "cold"):
            raise ContractViolationError("unknown interface %r" % interface)
        channels[interface] = detect_channels(rows, delta, interface=interface)

    endo = all(len(chs) == 1 for chs in channels.values())
    internal = any(
        len({c.direction for c in chs}) > 1 for chs in channels.values()
    )
    mode = _operation_mode(channels, internal)
    cop_est = _cop_estimate(channels)
    spread = 0.0
    for chs in channels.values():
        if len(chs) > 1:
            freqs = [c.frequency for c in chs]
            spread = max(spread, max(freqs) - min(freqs))
    return DiagnosisReport(
        channels=MappingProxyType(channels),
        endoreversible_consistent=endo,
        operation_mode=mode,
        cop_estimate=cop_est,
        irreversibility_scale=spread,
        internal_dissipation=internal,
    )


def _operation_mode(channels, internal):
    if internal:
        return "indeterminate"
    directions = {
        interface: chs[0].direction
        for interface, chs in channels.items()
        if chs
    }
    if not directions:
        return "indeterminate"
    if all(_CHILLER_SIGNS[i] == d for i, d in directions.items()):
        return "chiller"
    if all(_TRANSFORMER_SIGNS[i] == d for i, d in directions.items()):
        return "heat-transformer"
    return "indeterminate"


def _cop_estimate(channels):
    def mean_freq(interface):
        chs = channels.get(interface, ())
        if not chs:
            return None
        return sum(c.frequency for c in chs) / len(chs)

    w_c = mean_freq("cold")
    if w_c is None or w_c <= 0.0:
        return None
    w_h = mean_freq("hot")
    if w_h is not None and w_h > w_c:
        return w_c / (w_h - w_c)
    w_w = mean_freq("work")
    if w_w is not None and w_w > 0.0:
        return w_c / w_w
    return None
