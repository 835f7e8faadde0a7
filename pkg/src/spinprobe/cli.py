"""Command-line front end: presets, JSON configs, machine-readable output.

Subcommands: scan, diagnose, currents, validate. Configuration comes
from a single JSON document, command-line flags override file values,
and unknown keys are rejected. Exit codes: 0 success, 2 configuration
error, 3 numerical failure.
"""

import argparse
import json
import math
import sys
from dataclasses import replace
from types import MappingProxyType

from . import models, scanner, thermo
from .errors import (
    ContractViolationError,
    DomainError,
    SpinprobeError,
    UndefinedQuantityError,
)
from .lindblad import eigenoperator_decomposition, build_liouvillian
from .models import GAMMA_DEFAULT, Preset
from .scanner import DELTA_DEFAULT, GridSpec
from .steady import steady_state

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SCAN_HEADER = "omega,bias,bias_eq,delta,t_eff,q_w,q_h,q_c,sigma,residual"
CURRENTS_HEADER = "omega_c,q_w,q_h,q_c,sigma,cop,cop_endo,cop_carnot"

_CONFIG_KEYS = frozenset((
    "preset", "model", "probe", "grid", "interface", "interfaces",
    "delta", "group_tol", "format", "out", "strict",
))
_MODEL_KEYS = frozenset((
    "family", "omega_c", "omega_h", "g", "t_work", "t_hot", "t_cold", "gamma",
))
_PROBE_KEYS = frozenset(("interface", "j"))
_INTERFACES = ("cold", "hot", "work")

UNITS_TEXT = """\
Unit conventions (hbar = k_B = 1)

  omega, omega_c, omega_h, t_eff   energy units; frequencies and
  T_work, T_hot, T_cold            temperatures share one scale
  bias, bias_eq, delta             dimensionless polarization p_g - p_e
  q_w, q_h, q_c, sigma             serialized divided by gamma (steady
                                   currents are proportional to the bath
                                   coupling scale, so tables are
                                   gamma-independent)
  residual                         steady-state defect, the norm of the
                                   generator applied to the returned
                                   state (absolute)
  cop, cop_endo, cop_carnot        dimensionless ratios
"""


class _ConfigError(Exception):
    """Anything wrong with flags or the JSON config document."""


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.units:
        print(UNITS_TEXT, end="")
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("error: a subcommand is required", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = _load_config(args)
        runner = _RUNNERS[args.command]
        plan = runner.prepare(cfg)
    except _ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    try:
        return runner.run(plan, cfg)
    except SpinprobeError as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_NUMERICAL


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="spinprobe",
        description="Probe spectroscopy of continuous quantum heat pumps.",
    )
    parser.add_argument("--units", action="store_true",
                        help="print unit conventions and exit")
    sub = parser.add_subparsers(dest="command")
    for name, blurb in (
        ("scan", "sweep the probe frequency and tabulate bias and currents"),
        ("diagnose", "scan one or more interfaces and report the diagnosis"),
        ("currents", "sweep omega_c of the bare device and tabulate currents"),
        ("validate", "report weak-coupling validity checks"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--preset", help="named preset (see README for the list)")
        p.add_argument("--config", help="path to a JSON configuration document")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), dest="fmt",
                       help="table format for scan and currents")
        p.add_argument("--grid", help="sweep grid as min:max:points")
        p.add_argument("--interface", choices=_INTERFACES,
                       help="probe placement for scan and diagnose")
        p.add_argument("--strict", action="store_true",
                       help="validate: exit nonzero when a check fails")
    parser.set_defaults(command=None)
    return parser


def _load_config(args):
    cfg = {}
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise _ConfigError("cannot read config: %s" % exc)
        except json.JSONDecodeError as exc:
            raise _ConfigError("config is not valid JSON: %s" % exc)
        if not isinstance(cfg, dict):
            raise _ConfigError("config must be a single JSON object")
        unknown = sorted(set(cfg) - _CONFIG_KEYS)
        if unknown:
            raise _ConfigError("unknown config keys: %s" % ", ".join(unknown))
    if args.preset is not None:
        cfg["preset"] = args.preset
    if args.grid is not None:
        cfg["grid"] = args.grid
    if args.interface is not None:
        cfg["interface"] = args.interface
    if args.fmt is not None:
        cfg["format"] = args.fmt
    if args.out is not None:
        cfg["out"] = args.out
    if args.strict:
        cfg["strict"] = True
    return cfg


def _num(mapping, key, where):
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _ConfigError("%s.%s must be a number" % (where, key))
    return float(value)


def _resolve_preset(cfg):
    """Normalize `preset` or `model`/`probe` config into a Preset record."""
    has_preset = "preset" in cfg
    has_model = "model" in cfg
    if has_preset and has_model:
        raise _ConfigError("preset and model are mutually exclusive")
    if "probe" in cfg and not has_model:
        raise _ConfigError("probe requires an explicit model")
    if has_preset:
        if not isinstance(cfg["preset"], str):
            raise _ConfigError("preset must be a string")
        try:
            p = models.preset(cfg["preset"])
        except ContractViolationError as exc:
            raise _ConfigError(str(exc))
        if "interface" in cfg:
            iface = _checked_interface(cfg["interface"])
            if not p.probed:
                raise _ConfigError("preset %s has no probe" % p.name)
            p = replace(p, interface=iface)
        return p
    if not has_model:
        raise _ConfigError("one of preset or model is required")
    model = cfg["model"]
    if not isinstance(model, dict):
        raise _ConfigError("model must be a JSON object")
    unknown = sorted(set(model) - _MODEL_KEYS)
    if unknown:
        raise _ConfigError("unknown model keys: %s" % ", ".join(unknown))
    family = model.get("family")
    if family not in ("maser3", "pump4"):
        raise _ConfigError("model.family must be maser3 or pump4")
    if family == "maser3" and "g" in model:
        raise _ConfigError("model.g applies to pump4 only")
    params = {}
    for key in ("omega_c", "omega_h", "t_work", "t_hot", "t_cold"):
        if key not in model:
            raise _ConfigError("model.%s is required" % key)
        params[key] = _num(model, key, "model")
    params["gamma"] = _num(model, "gamma", "model") if "gamma" in model else GAMMA_DEFAULT
    if family == "pump4":
        if "g" not in model:
            raise _ConfigError("model.g is required for pump4")
        params["g"] = _num(model, "g", "model")
    probed = "probe" in cfg
    interface = "cold"
    if probed:
        probe = cfg["probe"]
        if not isinstance(probe, dict):
            raise _ConfigError("probe must be a JSON object")
        unknown = sorted(set(probe) - _PROBE_KEYS)
        if unknown:
            raise _ConfigError("unknown probe keys: %s" % ", ".join(unknown))
        if "j" not in probe:
            raise _ConfigError("probe.j is required")
        params["j"] = _num(probe, "j", "probe")
        interface = _checked_interface(probe.get("interface", "cold"))
        if "interface" in cfg:
            interface = _checked_interface(cfg["interface"])
    return Preset(
        name="custom", family=family, probed=probed, interface=interface,
        sweep="probe" if probed else "device",
        params=MappingProxyType(params), grid=None,
        note="explicit configuration",
    )


def _checked_interface(value):
    if value not in _INTERFACES:
        raise _ConfigError("interface must be one of %s" % ", ".join(_INTERFACES))
    return value


def _parse_grid(value):
    if isinstance(value, str):
        parts = value.split(":")
        if len(parts) != 3:
            raise _ConfigError("grid must be min:max:points")
        try:
            lo, hi, points = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise _ConfigError("grid must be min:max:points with numeric fields")
    elif isinstance(value, dict):
        unknown = sorted(set(value) - {"min", "max", "points"})
        if unknown:
            raise _ConfigError("unknown grid keys: %s" % ", ".join(unknown))
        try:
            lo = _num(value, "min", "grid")
            hi = _num(value, "max", "grid")
            points = value["points"]
        except KeyError as exc:
            raise _ConfigError("grid.%s is required" % exc.args[0])
        if isinstance(points, bool) or not isinstance(points, int):
            raise _ConfigError("grid.points must be an integer")
    else:
        raise _ConfigError("grid must be a min:max:points string or an object")
    try:
        return GridSpec(lo, hi, points)
    except ContractViolationError as exc:
        raise _ConfigError(str(exc))


def _resolve_grid(cfg, preset, required=True):
    if "grid" in cfg:
        return _parse_grid(cfg["grid"])
    if preset.grid is not None:
        return GridSpec(*preset.grid)
    if preset.probed:
        return _default_probe_grid(preset, preset.interface)
    if required:
        raise _ConfigError("explicit models need a grid")
    return None


def _default_probe_grid(preset, interface):
    center = _contact_center(preset.params, interface)
    half = 10.0 * max(preset.params["j"], preset.params.get("g", 0.0))
    return GridSpec(center - half, center + half, 401)


def _contact_center(params, interface):
    if interface == "cold":
        return params["omega_c"]
    if interface == "hot":
        return params["omega_h"]
    return params["omega_h"] - params["omega_c"]


def _resolve_delta(cfg):
    if "delta" not in cfg:
        return DELTA_DEFAULT
    value = _num(cfg, "delta", "config")
    if not value > 0.0:
        raise _ConfigError("delta must be positive")
    return value


def _resolve_group_tol(cfg):
    if "group_tol" not in cfg:
        return None
    value = _num(cfg, "group_tol", "config")
    if not value > 0.0:
        raise _ConfigError("group_tol must be positive")
    return value


def _resolve_format(cfg):
    fmt = cfg.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise _ConfigError("format must be csv or json")
    return fmt


def _check_buildable(preset, grid):
    """Catch bad physical parameters during the configuration phase."""
    center = 0.5 * (grid.lo + grid.hi) if grid is not None else None
    if center is None:
        center = preset.params.get("omega_c", 1.0)
    try:
        models.build_preset(preset, center)
    except SpinprobeError as exc:
        raise _ConfigError(str(exc))


def _emit(text, cfg):
    out = cfg.get("out")
    if out is None:
        sys.stdout.write(text)
        return
    if not isinstance(out, str):
        raise _ConfigError("out must be a path string")
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _g17(value):
    return "%.17g" % value


def _jsonable(value):
    if value is None or math.isfinite(value):
        return value
    return _g17(value)


# scan


def _prepare_scan(cfg):
    preset = _resolve_preset(cfg)
    if not preset.probed:
        raise _ConfigError("scan requires a probed preset or an explicit probe")
    grid = _resolve_grid(cfg, preset)
    _check_buildable(preset, grid)
    fmt = _resolve_format(cfg)
    config = scanner.ScanConfig(
        preset=preset, grid=grid,
        delta=_resolve_delta(cfg), group_tol=_resolve_group_tol(cfg),
    )
    return config, fmt


def _run_scan(plan, cfg):
    config, fmt = plan
    rows = scanner.scan(config)
    gamma = config.preset.params["gamma"]
    if fmt == "csv":
        lines = [SCAN_HEADER]
        for r in rows:
            lines.append(",".join(_g17(v) for v in (
                r.omega, r.bias, r.bias_eq, r.delta, r.t_eff,
                r.q_w / gamma, r.q_h / gamma, r.q_c / gamma,
                r.sigma / gamma, r.ness_residual,
            )))
        _emit("\n".join(lines) + "\n", cfg)
    else:
        payload = [
            {
                "omega": _jsonable(r.omega),
                "bias": _jsonable(r.bias),
                "bias_eq": _jsonable(r.bias_eq),
                "delta": _jsonable(r.delta),
                "t_eff": _jsonable(r.t_eff),
                "q_w": _jsonable(r.q_w / gamma),
                "q_h": _jsonable(r.q_h / gamma),
                "q_c": _jsonable(r.q_c / gamma),
                "sigma": _jsonable(r.sigma / gamma),
                "residual": _jsonable(r.ness_residual),
            }
            for r in rows
        ]
        _emit(json.dumps(payload, indent=2) + "\n", cfg)
    return EXIT_OK if all(r.ok for r in rows) else EXIT_NUMERICAL


# diagnose


def _prepare_diagnose(cfg):
    preset = _resolve_preset(cfg)
    if not preset.probed:
        raise _ConfigError("diagnose requires a probed preset or an explicit probe")
    if "interfaces" in cfg:
        raw = cfg["interfaces"]
        if not isinstance(raw, list) or not raw:
            raise _ConfigError("interfaces must be a nonempty list")
        interfaces = tuple(_checked_interface(i) for i in raw)
        if len(set(interfaces)) != len(interfaces):
            raise _ConfigError("interfaces must not repeat")
    else:
        interfaces = (preset.interface,)
    explicit_grid = _parse_grid(cfg["grid"]) if "grid" in cfg else None
    if explicit_grid is not None and len(interfaces) > 1:
        raise _ConfigError("an explicit grid needs a single interface")
    delta = _resolve_delta(cfg)
    group_tol = _resolve_group_tol(cfg)
    configs = {}
    for iface in interfaces:
        p = replace(preset, interface=iface)
        if explicit_grid is not None:
            grid = explicit_grid
        elif iface == preset.interface and preset.grid is not None:
            grid = GridSpec(*preset.grid)
        else:
            grid = _default_probe_grid(preset, iface)
        _check_buildable(p, grid)
        configs[iface] = scanner.ScanConfig(
            preset=p, grid=grid, delta=delta, group_tol=group_tol,
        )
    return configs, delta


def _run_diagnose(plan, cfg):
    configs, delta = plan
    scans = {iface: scanner.scan(c) for iface, c in configs.items()}
    report = scanner.diagnose(scans, delta)
    payload = {
        "channels": {
            iface: [
                {
                    "interface": ch.interface,
                    "frequency": _jsonable(ch.frequency),
                    "direction": ch.direction,
                    "prominence": _jsonable(ch.prominence),
                }
                for ch in chans
            ]
            for iface, chans in report.channels.items()
        },
        "endoreversible_consistent": report.endoreversible_consistent,
        "operation_mode": report.operation_mode,
        "cop_estimate": _jsonable(report.cop_estimate),
        "irreversibility_scale": _jsonable(report.irreversibility_scale),
        "internal_dissipation": report.internal_dissipation,
    }
    _emit(json.dumps(payload, indent=2) + "\n", cfg)
    ok = all(r.ok for rows in scans.values() for r in rows)
    return EXIT_OK if ok else EXIT_NUMERICAL


# currents


def _prepare_currents(cfg):
    preset = _resolve_preset(cfg)
    if preset.probed:
        raise _ConfigError("currents sweeps the bare device; drop the probe")
    grid = _resolve_grid(cfg, preset)
    _check_buildable(preset, grid)
    fmt = _resolve_format(cfg)
    group_tol = _resolve_group_tol(cfg)
    return preset, grid, fmt, group_tol


def _currents_point(preset, omega_c, group_tol):
    model = models.build_preset(preset, omega_c)
    channels = tuple(
        ch for bath in model.baths
        for ch in eigenoperator_decomposition(model.hamiltonian, bath, group_tol)
    )
    state = steady_state(build_liouvillian(model.hamiltonian, channels))
    return thermo.heat_currents(model, channels, state.rho)


def _run_currents(plan, cfg):
    preset, grid, fmt, group_tol = plan
    omega_h = preset.params["omega_h"]
    gamma = preset.params["gamma"]
    carnot = thermo.carnot_cop(
        preset.params["t_work"], preset.params["t_hot"], preset.params["t_cold"],
    )
    rows = []
    failed = False
    for omega_c in grid.values():
        omega_c = float(omega_c)
        nan = float("nan")
        try:
            endo = thermo.cop_endoreversible_estimate(omega_c, omega_h)
        except DomainError:
            failed = True
            rows.append((omega_c, nan, nan, nan, nan, None, nan, carnot))
            continue
        try:
            currents = _currents_point(preset, omega_c, group_tol)
        except SpinprobeError:
            failed = True
            rows.append((omega_c, nan, nan, nan, nan, None, endo, carnot))
            continue
        try:
            value = thermo.cop(currents)
        except UndefinedQuantityError:
            value = None
        rows.append((
            omega_c, currents.q_w / gamma, currents.q_h / gamma,
            currents.q_c / gamma, currents.sigma / gamma, value, endo, carnot,
        ))
    if fmt == "csv":
        lines = [CURRENTS_HEADER]
        for row in rows:
            lines.append(",".join("" if v is None else _g17(v) for v in row))
        _emit("\n".join(lines) + "\n", cfg)
    else:
        keys = CURRENTS_HEADER.split(",")
        payload = [
            {k: _jsonable(v) if v is not None else None for k, v in zip(keys, row)}
            for row in rows
        ]
        _emit(json.dumps(payload, indent=2) + "\n", cfg)
    return EXIT_NUMERICAL if failed else EXIT_OK


# validate


def _prepare_validate(cfg):
    preset = _resolve_preset(cfg)
    # validate builds one concrete model at the sweep center
    grid = None
    if "grid" in cfg:
        grid = _parse_grid(cfg["grid"])
    elif preset.grid is not None:
        grid = GridSpec(*preset.grid)
    if grid is not None:
        value = 0.5 * (grid.lo + grid.hi)
    elif preset.probed:
        value = _contact_center(preset.params, preset.interface)
    else:
        value = preset.params.get("omega_c")
        if value is None:
            raise _ConfigError("explicit models need a grid")
    try:
        model = models.build_preset(preset, value)
    except SpinprobeError as exc:
        raise _ConfigError(str(exc))
    return model, _resolve_group_tol(cfg), bool(cfg.get("strict", False))


def _run_validate(plan, cfg):
    model, group_tol, strict = plan
    report = models.validity_report(model, group_tol)
    payload = {
        "checks": [
            {
                "name": c.name,
                "satisfied": c.satisfied,
                "ratio": _jsonable(c.ratio),
                "detail": c.detail,
            }
            for c in report.checks
        ],
        "overall": report.overall,
    }
    _emit(json.dumps(payload, indent=2) + "\n", cfg)
    if strict and not report.overall:
        return EXIT_NUMERICAL
    return EXIT_OK


class _Runner:
    def __init__(self, prepare, run):
        self.prepare = prepare
        self.run = run


_RUNNERS = {
    "scan": _Runner(_prepare_scan, _run_scan),
    "diagnose": _Runner(_prepare_diagnose, _run_diagnose),
    "currents": _Runner(_prepare_currents, _run_currents),
    "validate": _Runner(_prepare_validate, _run_validate),
}


if __name__ == "__main__":
    sys.exit(main())
