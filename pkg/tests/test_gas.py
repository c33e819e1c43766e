import numpy as np
import pytest

from ice_control import (
    GasCoupling,
    GasKernel,
    Mixture,
    QuadratureSpec,
    Vacuum,
    apply_superoperator,
    build_gas_liouvillian,
    build_transition_table,
    energy_conserving_momentum,
    example_gas_coupling,
    four_level_example,
    jump_operator,
    pauli_rates,
    steady_state,
)
from ice_control.core import commutator_superoperator, random_density_matrix
from ice_control.distributions import QUADRATIC_EXP


@pytest.fixture
def spec():
    return four_level_example()


@pytest.fixture
def coupling():
    return example_gas_coupling()


def gas_mixture(centers, widths):
    return Mixture(
        centers=centers, widths=widths, envelope=QUADRATIC_EXP, envelope_beta=0.01
    )


class TestKinematics:
    def test_open_channel(self):
        assert energy_conserving_momentum(5.0, 2.0, 1.0) == pytest.approx(np.sqrt(21))

    def test_elastic(self):
        assert energy_conserving_momentum(3.7, 0.0, 1.0) == pytest.approx(3.7)

    def test_closed_channel(self):
        assert energy_conserving_momentum(3.0, 11.0, 1.0) is None

    def test_negative_momentum_rejected(self):
        with pytest.raises(ValueError):
            energy_conserving_momentum(-1.0, 2.0, 1.0)


class TestJumpOperator:
    def test_excitation_at_omega_11(self, spec, coupling):
        # k' = sqrt(144 - 22); only the (1, 0) excitation survives the windows
        A = jump_operator(spec, coupling, 11.0, 12.0)
        expected = np.zeros((4, 4), dtype=complex)
        expected[1, 0] = 0.8
        assert np.array_equal(A, expected)

    def test_window_blocks_omega_2(self, spec, coupling):
        # pair (2, 1) needs g_1(5) but level 1 window is [9, 24]
        A = jump_operator(spec, coupling, 2.0, 5.0)
        assert np.all(A == 0)

    def test_k_below_all_windows(self, spec, coupling):
        for omega in (2.0, -2.0, 11.0, -11.0):
            assert np.all(jump_operator(spec, coupling, omega, 1.0) == 0)

    def test_closed_channel_zero(self, spec, coupling):
        assert np.all(jump_operator(spec, coupling, 24.0, 4.0) == 0)

    def test_strength_scales_linearly(self, spec, coupling):
        strong = GasCoupling(windows=coupling.windows, strength=3.0)
        A1 = jump_operator(spec, coupling, 11.0, 12.0)
        A3 = jump_operator(spec, strong, 11.0, 12.0)
        assert np.allclose(A3, 3.0 * A1)


class TestWindows:
    def test_inclusive_endpoints(self, coupling):
        assert coupling.indicator(0, 12.0) == 1.0
        assert coupling.indicator(0, 2.0) == 1.0
        assert coupling.indicator(0, 12.0001) == 0.0

    def test_validation(self):
        with pytest.raises(ValueError, match="window"):
            GasCoupling(windows=((5.0, 5.0),))
        with pytest.raises(ValueError, match="strength"):
            GasCoupling(windows=((1.0, 2.0),), strength=0.0)


class TestLiouvillian:
    def test_vacuum_reduces_to_commutator(self, spec, coupling):
        L = build_gas_liouvillian(spec, Vacuum(), coupling)
        assert np.allclose(L, commutator_superoperator(spec.hamiltonian()), atol=0)

    def test_generator_contract(self, spec, coupling):
        rng = np.random.default_rng(5)
        dist = gas_mixture((10.0, 18.0), (2.0, 4.0))
        L = build_gas_liouvillian(spec, dist, coupling)
        for _ in range(10):
            rho = random_density_matrix(4, rng)
            out = apply_superoperator(L, rho)
            assert abs(np.trace(out)) < 1e-10
            assert np.max(np.abs(out - out.conj().T)) < 1e-10

    def test_kernel_matches_naive_quadrature(self, spec, coupling):
        """Independent oracle: rebuild the dissipator node by node."""
        quad = QuadratureSpec(k_min=0.0, k_max=40.0, nodes=150)
        dist = gas_mixture((8.0, 15.0, 21.0), (1.0, 2.0, 3.0))
        table = build_transition_table(spec)
        k, trap = quad.grid()
        n = dist.density(k)
        d = spec.dim
        eye = np.eye(d)
        L = commutator_superoperator(spec.hamiltonian())
        for entry in table.entries:
            for omega in (entry.frequency, -entry.frequency):
                for j in range(k.size):
                    kp = energy_conserving_momentum(k[j], omega, coupling.mass)
                    if kp is None:
                        continue
                    A = jump_operator(spec, coupling, omega, k[j], table)
                    if not A.any():
                        continue
                    wj = (4 * np.pi * k[j] ** 2 * trap[j] * n[j]) * (
                        4 * np.pi * coupling.mass * kp
                    )
                    AdA = A.conj().T @ A
                    L = L + 2 * np.pi * wj * (
                        np.kron(A.conj(), A)
                        - 0.5 * np.kron(eye, AdA)
                        - 0.5 * np.kron(AdA.T, eye)
                    )
        L_kernel = GasKernel(spec, coupling, quad).liouvillian(dist)
        assert np.max(np.abs(L - L_kernel)) < 1e-8 * np.max(np.abs(L))

    def test_grid_self_convergence_smooth(self, spec):
        # all channels open and the mixture supported away from the
        # kinematic thresholds, so the integrand is smooth and the default
        # grid is already converged
        open_coupling = GasCoupling(windows=((0.0, 100.0),) * 4)
        dist = gas_mixture((15.0, 22.0), (1.5, 2.0))
        rho_600, _ = steady_state(
            GasKernel(spec, open_coupling, QuadratureSpec(nodes=600)).liouvillian(dist)
        )
        rho_2400, _ = steady_state(
            GasKernel(spec, open_coupling, QuadratureSpec(nodes=2400)).liouvillian(dist)
        )
        assert np.max(np.abs(rho_600 - rho_2400)) < 1e-9

    def test_grid_self_convergence_windowed(self, spec, coupling):
        # window edges make the integrand discontinuous, so refinement only
        # converges at first order; check the default grid is within a few
        # parts in a thousand of a 8x finer one
        dist = gas_mixture((10.0, 20.0), (3.0, 5.0))
        rho_600, _ = steady_state(
            GasKernel(spec, coupling, QuadratureSpec(nodes=600)).liouvillian(dist)
        )
        rho_fine, _ = steady_state(
            GasKernel(spec, coupling, QuadratureSpec(nodes=4800)).liouvillian(dist)
        )
        assert np.max(np.abs(rho_600 - rho_fine)) < 5e-3

    def test_steady_state_invariant_under_strength_scale(self, spec, coupling):
        dist = gas_mixture((11.0, 19.0), (2.0, 2.0))
        rho_ref, _ = steady_state(build_gas_liouvillian(spec, dist, coupling))
        scaled = GasCoupling(windows=coupling.windows, strength=np.sqrt(10.0))
        rho_s, _ = steady_state(build_gas_liouvillian(spec, dist, scaled))
        assert np.max(np.abs(rho_s - rho_ref)) < 1e-8

    def test_mode_non_locality(self, spec, coupling):
        """Unlike radiation, bulk modes inside the windows matter."""
        base = gas_mixture((10.0, 20.0), (3.0, 3.0))

        class Perturbed:
            def density(self, k):
                k = np.asarray(k, dtype=float)
                # bump at k=6.5, far from every Bohr frequency but inside windows
                return base.density(k) + 0.5 * np.exp(-((k - 6.5) ** 2) / 0.5)

        L0 = build_gas_liouvillian(spec, base, coupling)
        L1 = build_gas_liouvillian(spec, Perturbed(), coupling)
        assert np.max(np.abs(L0 - L1)) > 1e-6

    def test_window_count_must_match_levels(self, spec):
        with pytest.raises(ValueError, match="window"):
            GasKernel(spec, GasCoupling(windows=((1.0, 2.0),)))


class TestPauliRates:
    def test_vacuum_zero(self, spec, coupling):
        assert np.all(pauli_rates(spec, Vacuum(), coupling) == 0)

    def test_nonnegative_for_random_mixtures(self, spec, coupling):
        rng = np.random.default_rng(9)
        kernel = GasKernel(spec, coupling)
        for _ in range(20):
            dist = gas_mixture(
                tuple(rng.uniform(0, 30, 3)), tuple(rng.uniform(0.5, 5, 3))
            )
            w = kernel.pauli_rates(dist)
            assert np.all(w >= 0)
            assert np.all(np.diag(w) == 0)

    def test_matches_definition_on_one_entry(self, spec, coupling):
        """w[1, 0] (excitation 0 -> 1 at omega=11) against direct quadrature."""
        quad = QuadratureSpec(nodes=400)
        dist = gas_mixture((12.0,), (2.0,))
        k, trap = quad.grid()
        n = dist.density(k)
        total = 0.0
        for j in range(k.size):
            kp = energy_conserving_momentum(k[j], 11.0, 1.0)
            if kp is None:
                continue
            g = coupling.indicator(1, kp) * coupling.indicator(0, k[j])
            total += (
                np.pi
                * (4 * np.pi * k[j] ** 2 * trap[j] * n[j])
                * (4 * np.pi * kp)
                * 0.8**2
                * g
            )
        w = GasKernel(spec, coupling, quad).pauli_rates(dist)
        assert w[1, 0] == pytest.approx(total, rel=1e-12)
