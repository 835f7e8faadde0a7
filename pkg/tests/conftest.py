"""Session fixtures and the acceptance summary.

The six figure scans and the bare-device current sweeps are expensive,
so they are computed once per session here and shared between the
scanner tests and the acceptance checks. The terminal summary hook
prints one PASS/FAIL line per acceptance criterion after the run.
"""

import time

import pytest

from spinprobe import models, scanner
from spinprobe.errors import DomainError

import helpers

PRESET_SCAN_NAMES = ("fig2a", "fig2b", "fig3a", "fig3b", "fig3b-j001", "fig3c")
BARE_PRESET_NAMES = ("maser3", "pump4-g01", "pump4-g05")

_CRITERIA = {}


def record_criterion(number, passed, detail):
    _CRITERIA[number] = (bool(passed), str(detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, detail = _CRITERIA[number]
        terminalreporter.write_line(
            "criterion %2d: %s - %s" % (number, "PASS" if passed else "FAIL", detail))


@pytest.fixture(scope="session")
def criterion_log():
    """Callable (number, passed, detail) feeding the terminal summary."""
    return record_criterion


@pytest.fixture(scope="session")
def preset_scans():
    """All six figure scans: name -> (rows, wall seconds)."""
    out = {}
    for name in PRESET_SCAN_NAMES:
        config = scanner.config_for(name)
        start = time.perf_counter()
        rows = scanner.scan(config)
        out[name] = (rows, time.perf_counter() - start)
    return out


@pytest.fixture(scope="session")
def bare_sweeps():
    """Bare-device sweeps over the shipped grids: name -> [(omega_c, Solved | None)].

    A grid point outside the builder domain (pump4-g05 starts its grid
    exactly at omega_c = g) is recorded as None.
    """
    out = {}
    for name in BARE_PRESET_NAMES:
        preset = models.preset(name)
        rows = []
        for omega_c in scanner.GridSpec(*preset.grid).values():
            omega_c = float(omega_c)
            try:
                model = models.build_preset(preset, omega_c)
            except DomainError:
                rows.append((omega_c, None))
                continue
            rows.append((omega_c, helpers.solve(model)))
        out[name] = rows
    return out


@pytest.fixture(scope="session")
def maser_points():
    """Bare maser solved at the reference frequencies the checks reuse."""
    out = {}
    for omega_c in (2.0, 4.0, 6.0, 7.5, 9.0, 10.0, 12.5):
        model = models.build_maser3(omega_c, 40.0, 30.0, 20.0, 10.0)
        out[omega_c] = helpers.solve(model)
    return out
