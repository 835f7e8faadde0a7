"""Steady-state solver: detailed balance limits, scaling, uniqueness."""

import math

import numpy as np
import pytest

import oracles
from spinprobe import lindblad, models, steady
from spinprobe.errors import NonErgodicError
from spinprobe.lindblad import (
    BathSpec,
    Liouvillian,
    build_liouvillian,
    eigenoperator_decomposition,
)
from spinprobe.steady import steady_state, uniqueness_report


def _assemble(h, baths, group_tol=None):
    channels = []
    for bath in baths:
        channels.extend(eigenoperator_decomposition(h, bath, group_tol=group_tol))
    return build_liouvillian(h, channels)


def _qubit_liouvillian(omega, temperature, gamma=1e-3):
    h = np.diag([0.0, omega])
    bath = BathSpec(label="cold", temperature=temperature, gamma=gamma,
                    coupling=np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128))
    return h, _assemble(h, [bath])


class TestSingleQubit:
    def test_boltzmann_population_ratio(self):
        h, liou = _qubit_liouvillian(7.5, 10.0)
        state = steady_state(liou)
        ratio = state.rho[1, 1].real / state.rho[0, 0].real
        assert math.isclose(ratio, math.exp(-0.75), rel_tol=1e-12)
        assert abs(state.rho[0, 1]) < 1e-14
        assert state.null_dim == 1

    def test_matches_gibbs(self):
        h, liou = _qubit_liouvillian(7.5, 10.0)
        state = steady_state(liou)
        gibbs = oracles.gibbs_state(h, 10.0)
        assert np.max(np.abs(state.rho - gibbs)) < 1e-12


class TestEqualTemperatureGibbs:
    """A device with all baths at one temperature relaxes to the Gibbs
    state of its hamiltonian at that temperature."""

    def test_maser_device(self):
        model = models.build_maser3(7.5, 40.0, 15.0, 15.0, 15.0)
        liou = _assemble(model.hamiltonian, model.baths)
        state = steady_state(liou)
        gibbs = oracles.gibbs_state(model.hamiltonian, 15.0)
        assert np.max(np.abs(state.rho - gibbs)) < 1e-8

    def test_probed_pump(self):
        model = models.build_pump4_with_probe(
            7.5, 40.0, 0.5, 15.0, 15.0, 15.0, omega=7.2, j=0.1,
            interface="cold")
        liou = _assemble(model.hamiltonian, model.baths)
        state = steady_state(liou)
        gibbs = oracles.gibbs_state(model.hamiltonian, 15.0)
        assert np.max(np.abs(state.rho - gibbs)) < 1e-8

    def test_random_probed_masers(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            omega_c, omega_h, omega, j = oracles.random_maser_draw(rng)
            temp = float(rng.uniform(5.0, 40.0))
            model = models.build_maser3_with_probe(
                omega_c, omega_h, temp, temp, temp,
                omega=omega, j=j, interface="cold")
            liou = _assemble(model.hamiltonian, model.baths)
            state = steady_state(liou)
            gibbs = oracles.gibbs_state(model.hamiltonian, temp)
            assert np.max(np.abs(state.rho - gibbs)) < 1e-8


class TestInvariances:
    def test_gamma_rescaling_leaves_state_unchanged(self):
        base = models.build_maser3_with_probe(
            7.5, 40.0, 30.0, 20.0, 10.0, omega=7.3, j=0.1, interface="cold",
            gamma=1e-7)
        rho_ref = steady_state(_assemble(base.hamiltonian, base.baths)).rho
        for factor in (1e-2, 1e2):
            scaled = models.build_maser3_with_probe(
                7.5, 40.0, 30.0, 20.0, 10.0, omega=7.3, j=0.1,
                interface="cold", gamma=1e-7 * factor)
            rho = steady_state(_assemble(scaled.hamiltonian, scaled.baths)).rho
            assert np.max(np.abs(rho - rho_ref)) < 1e-10

    def test_basis_covariance(self):
        model = models.build_maser3(7.5, 40.0, 30.0, 20.0, 10.0)
        rho_ref = steady_state(_assemble(model.hamiltonian, model.baths)).rho
        rng = np.random.default_rng(47)
        raw = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        q, r = np.linalg.qr(raw)
        u = q * (np.diag(r) / np.abs(np.diag(r)))
        h_rot = u @ model.hamiltonian @ u.conj().T
        baths_rot = [
            BathSpec(label=b.label, temperature=b.temperature, gamma=b.gamma,
                     coupling=u @ b.coupling @ u.conj().T)
            for b in model.baths
        ]
        rho_rot = steady_state(_assemble(h_rot, baths_rot)).rho
        assert np.max(np.abs(u.conj().T @ rho_rot @ u - rho_ref)) < 1e-9


class TestDiagnostics:
    def test_fixed_point_residual_bound(self, maser_points):
        for solved in maser_points.values():
            scale = float(np.linalg.norm(solved.liouvillian.matrix))
            assert solved.state.residual <= steady.RESIDUAL_FACTOR * scale
            assert solved.state.min_eigenvalue >= steady.POSITIVITY_FLOOR

    def test_state_is_read_only_unit_trace(self):
        _, liou = _qubit_liouvillian(7.5, 10.0)
        state = steady_state(liou)
        assert math.isclose(state.rho.trace().real, 1.0, abs_tol=1e-14)
        with pytest.raises(ValueError):
            state.rho[0, 0] = 0.5

    def test_zero_generator_not_ergodic(self):
        liou = Liouvillian(dim=2, matrix=np.zeros((4, 4), dtype=np.complex128),
                           channels=())
        with pytest.raises(NonErgodicError) as err:
            steady_state(liou)
        assert err.value.null_dim == 4

    def test_disconnected_level_not_ergodic(self):
        # a qubit channel embedded in a 3-level space leaves the third
        # level disconnected: two independent stationary states
        h = np.diag([0.0, 7.5, 20.0])
        coup = np.zeros((3, 3))
        coup[0, 1] = coup[1, 0] = 1.0
        bath = BathSpec(label="cold", temperature=10.0, gamma=1e-3,
                        coupling=coup.astype(np.complex128))
        liou = _assemble(h, [bath])
        with pytest.raises(NonErgodicError) as err:
            steady_state(liou)
        assert err.value.null_dim >= 2
        report = uniqueness_report(liou)
        assert report.null_dim == err.value.null_dim

    def test_uniqueness_report_on_ergodic_model(self, maser_points):
        solved = maser_points[7.5]
        report = uniqueness_report(solved.liouvillian)
        assert report.null_dim == 1
        assert report.gap > 0.0
