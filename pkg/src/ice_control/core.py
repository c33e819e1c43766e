"""Value types and operator algebra for finite-level systems.

Conventions used throughout the package:

* units with hbar = k_B = c = 1,
* density matrices are plain complex ``(d, d)`` numpy arrays,
* superoperators are ``(d**2, d**2)`` complex matrices acting on
  column-stacked vectorized density matrices,
* level indices are 0-based in code; error messages use 0-based indices too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SystemSpec",
    "TransitionEntry",
    "TransitionTable",
    "build_transition_table",
    "transition_operator",
    "frobenius_distance",
    "vectorize",
    "devectorize",
    "apply_superoperator",
    "commutator_superoperator",
    "check_density_matrix",
    "random_density_matrix",
    "four_level_example",
]


@dataclass(frozen=True)
class SystemSpec:
    """A finite-level system: energy eigenvalues and a coupling (dipole) matrix.

    ``energies`` must be finite and sorted non-decreasing.  ``dipole`` must be
    real symmetric with zero diagonal; set ``allow_diagonal_dipole=True`` to
    permit elastic (diagonal) couplings for general models.
    """

    energies: np.ndarray
    dipole: np.ndarray
    allow_diagonal_dipole: bool = False

    def __post_init__(self):
        energies = np.asarray(self.energies, dtype=float)
        dipole = np.asarray(self.dipole, dtype=float)
        if energies.ndim != 1 or energies.size == 0:
            raise ValueError("energies must be a non-empty 1-d array")
        if not np.all(np.isfinite(energies)):
            raise ValueError("energies must be finite")
        if np.any(np.diff(energies) < 0):
            raise ValueError("energies must be sorted non-decreasing")
        d = energies.size
        if dipole.shape != (d, d):
            raise ValueError(f"dipole must be {d}x{d}, got {dipole.shape}")
        if not np.all(np.isfinite(dipole)):
            raise ValueError("dipole must be finite")
        if not np.allclose(dipole, dipole.T, atol=0.0):
            raise ValueError("dipole must be symmetric")
        if not self.allow_diagonal_dipole and np.any(np.diag(dipole) != 0.0):
            raise ValueError("dipole diagonal must be zero (see allow_diagonal_dipole)")
        energies.flags.writeable = False
        dipole.flags.writeable = False
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "dipole", dipole)

    @property
    def dim(self) -> int:
        return self.energies.size

    def hamiltonian(self) -> np.ndarray:
        """Free Hamiltonian diag(energies) as a complex matrix."""
        return np.diag(self.energies).astype(complex)


def four_level_example() -> SystemSpec:
    """The shipped four-level demonstration system."""
    dipole = np.array(
        [
            [0.0, 0.8, 0.3, 0.5],
            [0.8, 0.0, 0.2, 0.7],
            [0.3, 0.2, 0.0, 1.0],
            [0.5, 0.7, 1.0, 0.0],
        ]
    )
    return SystemSpec(energies=np.array([0.0, 11.0, 13.0, 24.0]), dipole=dipole)


@dataclass(frozen=True)
class TransitionEntry:
    """One positive transition frequency and the level pairs sharing it.

    Pairs are ``(m, n)`` with ``m`` the lower and ``n`` the upper level index
    (0-based), so ``energies[n] - energies[m] == frequency``.
    """

    frequency: float
    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class TransitionTable:
    entries: tuple[TransitionEntry, ...]

    def frequencies(self) -> np.ndarray:
        return np.array([e.frequency for e in self.entries])

    def lookup(self, omega: float, tol: float = 1e-9) -> TransitionEntry | None:
        for entry in self.entries:
            if abs(entry.frequency - omega) <= tol:
                return entry
        return None


def build_transition_table(spec: SystemSpec, tol: float = 1e-9) -> TransitionTable:
    """All positive transition frequencies of ``spec``, degenerate ones grouped.

    Frequencies closer than ``tol`` (absolute) are treated as equal and their
    level pairs are merged under a single entry.
    """
    groups: list[tuple[float, list[tuple[int, int]]]] = []
    d = spec.dim
    for m in range(d):
        for n in range(m + 1, d):
            omega = spec.energies[n] - spec.energies[m]
            if omega <= tol:
                continue
            for i, (freq, pairs) in enumerate(groups):
                if abs(freq - omega) <= tol:
                    pairs.append((m, n))
                    break
            else:
                groups.append((float(omega), [(m, n)]))
    groups.sort(key=lambda g: g[0])
    entries = tuple(
        TransitionEntry(frequency=freq, pairs=tuple(pairs)) for freq, pairs in groups
    )
    return TransitionTable(entries=entries)


def transition_operator(
    spec: SystemSpec, table: TransitionTable, omega: float, tol: float = 1e-9
) -> np.ndarray:
    """Lowering operator for transition frequency ``omega``.

    Entry ``(m, n)`` equals ``dipole[m, n]`` for every pair grouped under
    ``omega``; the zero matrix if ``omega`` is not in the table.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    d = spec.dim
    op = np.zeros((d, d), dtype=complex)
    entry = table.lookup(omega, tol)
    if entry is None:
        return op
    for m, n in entry.pairs:
        op[m, n] = spec.dipole[m, n]
    return op


def frobenius_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """sqrt of the sum of squared moduli of elementwise differences."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    return float(np.linalg.norm(rho - sigma))


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stacked vectorization of a matrix."""
    rho = np.asarray(rho)
    return rho.reshape(-1, order="F")


def devectorize(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v)
    d = math.isqrt(v.size)
    if d * d != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    return v.reshape((d, d), order="F")


def apply_superoperator(L: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply a superoperator matrix to a density matrix."""
    return devectorize(L @ vectorize(rho))


def commutator_superoperator(H: np.ndarray) -> np.ndarray:
    """Superoperator of ``rho -> -i [H, rho]`` (column-stacking convention)."""
    H = np.asarray(H, dtype=complex)
    d = H.shape[0]
    eye = np.eye(d)
    return -1j * (np.kron(eye, H) - np.kron(H.T, eye))


def check_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-10,
    eig_tol: float = 1e-9,
) -> None:
    """Raise ValueError unless ``rho`` is Hermitian, unit-trace and positive.

    Tolerances: Hermiticity and trace within their stated absolute tolerance,
    eigenvalues allowed to dip to ``-eig_tol``.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    herm_err = np.max(np.abs(rho - rho.conj().T))
    if herm_err > herm_tol:
        raise ValueError(f"not Hermitian: max asymmetry {herm_err:.3e}")
    trace_err = abs(np.trace(rho) - 1.0)
    if trace_err > trace_tol:
        raise ValueError(f"trace differs from 1 by {trace_err:.3e}")
    eigs = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if eigs.min() < -eig_tol:
        raise ValueError(f"negative eigenvalue {eigs.min():.3e}")


def random_density_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix (Ginibre construction)."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)
