"""Lindblad generator for a system coupled to isotropic incoherent radiation.

For each positive transition frequency w the photon field opens an emission
channel through the lowering operator mu_w and an absorption channel through
its adjoint.  The environment distribution n(k) is the mean occupation number
per field mode at momentum magnitude k; with a constant form factor g0 the
3-d delta integral over photon momenta reduces to the angular factor
4 pi w^2, so

    gamma_down = 4 pi^2 g0^2 w^2 (n(w) + 1)      (emission, spontaneous + stimulated)
    gamma_up   = 4 pi^2 g0^2 w^2 n(w)            (absorption)

which makes detailed balance exact for a thermal spectrum:
gamma_up / gamma_down = exp(-w/T), forcing the Gibbs steady state.

The full generator is -i[H0, .] plus, per frequency, the Lindblad bracket
2 A rho A+ - A+ A rho - rho A+ A weighted by these rates.  Only the values of
n(k) at the transition frequencies enter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    SystemSpec,
    TransitionTable,
    build_transition_table,
    commutator_superoperator,
    transition_operator,
)

__all__ = [
    "RadiationCoupling",
    "radiation_rates",
    "build_radiation_liouvillian",
    "radiation_pauli_rates",
]


@dataclass(frozen=True)
class RadiationCoupling:
    """Constant dipole-field form-factor amplitude and an optional fixed drive.

    ``drive`` is a hook for a sampled field waveform handled by the propagator;
    it never enters the stationary generator.
    """

    g0: float = 1.0
    drive: object | None = None

    def __post_init__(self):
        if self.g0 <= 0:
            raise ValueError("g0 must be positive")


def radiation_rates(omega: float, dist, g0: float) -> tuple[float, float]:
    """(emission, absorption) rates at transition frequency ``omega``."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    n = float(dist.density(omega))
    base = 4 * np.pi**2 * g0**2 * omega**2
    return base * (n + 1.0), base * n


def _lindblad_bracket(A: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> 2 A rho A+ - A+ A rho - rho A+ A."""
    d = A.shape[0]
    eye = np.eye(d)
    AdA = A.conj().T @ A
    return 2 * np.kron(A.conj(), A) - np.kron(eye, AdA) - np.kron(AdA.T, eye)


def build_radiation_liouvillian(
    spec: SystemSpec,
    dist,
    coupling: RadiationCoupling,
    table: TransitionTable | None = None,
) -> np.ndarray:
    """Full Liouvillian -i[H0, .] + radiation dissipator for distribution ``dist``."""
    if table is None:
        table = build_transition_table(spec)
    L = commutator_superoperator(spec.hamiltonian())
    for entry in table.entries:
        mu_w = transition_operator(spec, table, entry.frequency)
        gamma_down, gamma_up = radiation_rates(entry.frequency, dist, coupling.g0)
        L = L + gamma_down * _lindblad_bracket(mu_w)
        L = L + gamma_up * _lindblad_bracket(mu_w.conj().T)
    return L


def radiation_pauli_rates(
    spec: SystemSpec, dist, coupling: RadiationCoupling
) -> np.ndarray:
    """Classical transition rates w[m, n] (level n -> m) of the radiation generator.

    On diagonal states the full generator reduces to the rate equation
    dp_l/dt = 2 sum_n (w[l, n] p_n - w[n, l] p_l) with these rates.
    """
    d = spec.dim
    w = np.zeros((d, d))
    for m in range(d):
        for n in range(d):
            if m == n:
                continue
            omega = abs(spec.energies[n] - spec.energies[m])
            if omega == 0.0:
                continue
            gamma_down, gamma_up = radiation_rates(omega, dist, coupling.g0)
            gamma = gamma_down if spec.energies[m] < spec.energies[n] else gamma_up
            w[m, n] = gamma * spec.dipole[m, n] ** 2
    return w
