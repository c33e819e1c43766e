"""Dissipative generator for a fixed system immersed in a dilute gas.

Scattering of a gas particle (mass M, momentum magnitude k) off the system
exchanges energy with the level structure.  For a signed transition frequency
w (positive = system excitation) energy conservation fixes the outgoing
momentum k' = sqrt(k^2 - 2 M w); the channel is closed when the argument is
negative.  In the weak-coupling model the jump operator at (w, k) is

    A = lam * sum_{(m,n): e_m - e_n = w} mu[m, n] g_m(k') g_n(k) |m><n|

with per-level momentum windows g_n = indicator([a_n, b_n]) (endpoints
included).  The 3-d momentum integrals reduce to radial quadrature with the
geometry weight (4 pi k^2 dk) * (4 pi M k'), every term carrying one factor of
the gas density n(k); the Lindblad bracket here is A rho A+ - {A+ A, rho}/2
with an overall 2 pi.

Because the windows are piecewise constant, A takes only a handful of distinct
values over the quadrature grid.  :class:`GasKernel` groups grid nodes by
jump-operator pattern once, after which building the Liouvillian for a new
distribution costs one density evaluation plus a small tensor contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    SystemSpec,
    TransitionTable,
    build_transition_table,
    commutator_superoperator,
)

__all__ = [
    "GasCoupling",
    "QuadratureSpec",
    "GasKernel",
    "energy_conserving_momentum",
    "jump_operator",
    "build_gas_liouvillian",
    "pauli_rates",
    "example_gas_coupling",
]


@dataclass(frozen=True)
class GasCoupling:
    """Per-level momentum windows, coupling scale and gas-particle mass.

    Transition amplitudes are taken from ``SystemSpec.dipole``.
    """

    windows: tuple[tuple[float, float], ...]
    strength: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        for i, (a, b) in enumerate(self.windows):
            if not a < b:
                raise ValueError(f"window {i}: need a < b, got [{a}, {b}]")
        if self.strength <= 0:
            raise ValueError("strength must be positive")
        if self.mass <= 0:
            raise ValueError("mass must be positive")

    def indicator(self, level: int, k):
        a, b = self.windows[level]
        k = np.asarray(k, dtype=float)
        out = ((k >= a) & (k <= b)).astype(float)
        return float(out) if out.ndim == 0 else out


def example_gas_coupling() -> GasCoupling:
    """Windows for the shipped four-level gas model (unit mass and strength)."""
    return GasCoupling(windows=((2.0, 12.0), (9.0, 24.0), (3.0, 17.0), (14.0, 26.0)))


@dataclass(frozen=True)
class QuadratureSpec:
    """Trapezoid grid for the radial momentum integral."""

    k_min: float = 0.0
    k_max: float = 40.0
    nodes: int = 600

    def __post_init__(self):
        if not (0 <= self.k_min < self.k_max):
            raise ValueError("need 0 <= k_min < k_max")
        if self.nodes < 16:
            raise ValueError("need at least 16 quadrature nodes")

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and trapezoid weights."""
        k = np.linspace(self.k_min, self.k_max, self.nodes)
        dk = (self.k_max - self.k_min) / (self.nodes - 1)
        w = np.full(self.nodes, dk)
        w[0] = w[-1] = dk / 2
        return k, w


def energy_conserving_momentum(k: float, omega: float, mass: float) -> float | None:
    """Outgoing momentum sqrt(k^2 - 2 M omega), or None if the channel is closed."""
    if k < 0:
        raise ValueError("momentum magnitude must be non-negative")
    s = k * k - 2 * mass * omega
    if s < 0:
        return None
    return math.sqrt(s)


def _signed_channels(spec: SystemSpec, table: TransitionTable):
    """(signed omega, ordered pairs (m, n) with e_m - e_n = omega) for both signs."""
    channels = []
    for entry in table.entries:
        up = tuple((n, m) for m, n in entry.pairs)  # excitation: m upper, n lower
        down = tuple(entry.pairs)  # de-excitation
        channels.append((entry.frequency, up))
        channels.append((-entry.frequency, down))
    return channels


def jump_operator(
    spec: SystemSpec,
    coupling: GasCoupling,
    omega: float,
    k: float,
    table: TransitionTable | None = None,
) -> np.ndarray:
    """Jump operator A(omega, k) for a signed transition frequency.

    Zero matrix if the channel is closed or ``omega`` is not (plus or minus)
    a transition frequency of the system.
    """
    if table is None:
        table = build_transition_table(spec)
    d = spec.dim
    A = np.zeros((d, d), dtype=complex)
    kp = energy_conserving_momentum(k, omega, coupling.mass)
    if kp is None:
        return A
    for w, pairs in _signed_channels(spec, table):
        if abs(w - omega) > 1e-9:
            continue
        for m, n in pairs:
            A[m, n] += (
                coupling.strength
                * spec.dipole[m, n]
                * coupling.indicator(m, kp)
                * coupling.indicator(n, k)
            )
    return A


class GasKernel:
    """Distribution-independent part of the gas Liouvillian and Pauli rates.

    Precomputes, per signed transition channel, the distinct jump-operator
    patterns over the quadrature grid together with the geometry weights, so
    that :meth:`liouvillian` is cheap enough for inner optimization loops.
    """

    def __init__(
        self,
        spec: SystemSpec,
        coupling: GasCoupling,
        quad: QuadratureSpec = QuadratureSpec(),
        table: TransitionTable | None = None,
    ):
        if len(coupling.windows) != spec.dim:
            raise ValueError("coupling needs one momentum window per level")
        self.spec = spec
        self.coupling = coupling
        self.quad = quad
        self.table = table if table is not None else build_transition_table(spec)
        self.grid, trap = quad.grid()
        self._commutator = commutator_superoperator(spec.hamiltonian())

        d = spec.dim
        mass = coupling.mass
        brackets: list[np.ndarray] = []
        rows: list[np.ndarray] = []
        pauli_rows = np.zeros((d, d, self.grid.size))
        eye = np.eye(d)
        for omega, pairs in _signed_channels(spec, self.table):
            s = self.grid**2 - 2 * mass * omega
            open_ch = s >= 0
            kp = np.sqrt(np.where(open_ch, s, 0.0))
            # geometry weight of the double 3-d integral, one factor n(k) pending
            geom = (4 * np.pi * self.grid**2 * trap) * (4 * np.pi * mass * kp)
            geom[~open_ch] = 0.0
            active = np.zeros((len(pairs), self.grid.size), dtype=bool)
            for p, (m, n) in enumerate(pairs):
                active[p] = (
                    open_ch
                    & (self.coupling.indicator(m, kp) > 0)
                    & (self.coupling.indicator(n, self.grid) > 0)
                )
                amp = coupling.strength * spec.dipole[m, n]
                pauli_rows[m, n] += np.pi * geom * amp**2 * active[p]
            patterns, inverse = np.unique(active, axis=1, return_inverse=True)
            for g in range(patterns.shape[1]):
                pattern = patterns[:, g]
                if not pattern.any():
                    continue
                A = np.zeros((d, d), dtype=complex)
                for p, (m, n) in enumerate(pairs):
                    if pattern[p]:
                        A[m, n] += coupling.strength * spec.dipole[m, n]
                AdA = A.conj().T @ A
                bracket = (
                    np.kron(A.conj(), A)
                    - 0.5 * np.kron(eye, AdA)
                    - 0.5 * np.kron(AdA.T, eye)
                )
                row = np.where(inverse == g, 2 * np.pi * geom, 0.0)
                brackets.append(bracket)
                rows.append(row)
        if brackets:
            self._brackets = np.stack(brackets)
            self._rows = np.stack(rows)
        else:
            self._brackets = np.zeros((0, d * d, d * d), dtype=complex)
            self._rows = np.zeros((0, self.grid.size))
        self._pauli_rows = pauli_rows

    def density_on_grid(self, dist) -> np.ndarray:
        return np.asarray(dist.density(self.grid), dtype=float)

    def liouvillian(self, dist) -> np.ndarray:
        """Full generator -i[H0, .] + gas dissipator for distribution ``dist``."""
        n = self.density_on_grid(dist)
        coeffs = self._rows @ n
        return self._commutator + np.tensordot(coeffs, self._brackets, axes=1)

    def pauli_rates(self, dist) -> np.ndarray:
        """Classical transition rates w[m, n] (level n -> m); diagonal is zero."""
        n = self.density_on_grid(dist)
        return self._pauli_rows @ n


def build_gas_liouvillian(
    spec: SystemSpec,
    dist,
    coupling: GasCoupling,
    quad: QuadratureSpec = QuadratureSpec(),
) -> np.ndarray:
    return GasKernel(spec, coupling, quad).liouvillian(dist)


def pauli_rates(
    spec: SystemSpec,
    dist,
    coupling: GasCoupling,
    quad: QuadratureSpec = QuadratureSpec(),
) -> np.ndarray:
    return GasKernel(spec, coupling, quad).pauli_rates(dist)
