"""Shared utilities for building, solving, and comparing models in tests."""

from dataclasses import dataclass

import numpy as np

from spinprobe import lindblad, steady, thermo
from spinprobe.errors import UndefinedQuantityError


@dataclass(frozen=True)
class Solved:
    """A model taken to its steady state, with the pieces tests inspect."""

    model: object
    channels: tuple
    liouvillian: object
    state: object
    currents: object


def decompose(model, group_tol=None):
    """All decay channels of a model, concatenated over its baths."""
    return tuple(
        ch
        for bath in model.baths
        for ch in lindblad.eigenoperator_decomposition(model.hamiltonian, bath, group_tol)
    )


def solve(model, group_tol=None):
    """Decompose, assemble the generator, solve, and read the currents."""
    channels = decompose(model, group_tol)
    liou = lindblad.build_liouvillian(model.hamiltonian, channels)
    state = steady.steady_state(liou)
    currents = thermo.heat_currents(model, channels, state.rho)
    return Solved(model, channels, liou, state, currents)


def cop_or_none(currents):
    try:
        return thermo.cop(currents)
    except UndefinedQuantityError:
        return None


def trace_distance(a, b):
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def max_current(currents):
    return max(abs(currents.q_w), abs(currents.q_h), abs(currents.q_c))


def clausius_sum(currents, model):
    temps = {bath.label: bath.temperature for bath in model.baths}
    return (currents.q_w / temps["work"] + currents.q_h / temps["hot"]
            + currents.q_c / temps["cold"])
