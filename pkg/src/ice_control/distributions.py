"""Radial occupation-number densities n(k) of the environment.

These are the control objects: optimizable Gaussian mixtures with an
exponential envelope, plus Planck, Boltzmann and vacuum baselines.  All
distributions are isotropic and depend only on the momentum magnitude k;
angular factors live in the dissipator modules.

Any object with a ``density(k)`` method accepting scalars and arrays can be
used wherever an environment distribution is expected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Mixture",
    "Planck",
    "BoltzmannGas",
    "Vacuum",
    "boltzmann_normalization",
    "sample_density",
    "LINEAR_EXP",
    "QUADRATIC_EXP",
]

LINEAR_EXP = "linear-exp"
QUADRATIC_EXP = "quadratic-exp"


def _check_momentum(k):
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("momentum magnitude must be non-negative")
    return k


@dataclass(frozen=True)
class Mixture:
    """Gaussian mixture n(k) = envelope(k) * sum_i N(k; k_i, D_i).

    Each component is exp(-(k-k_i)^2 / 2 D_i) / sqrt(2 pi D_i); the envelope
    is exp(-beta k) (``linear-exp``) or exp(-beta k^2) (``quadratic-exp``).
    """

    centers: tuple[float, ...]
    widths: tuple[float, ...]
    envelope: str = LINEAR_EXP
    envelope_beta: float = 0.05

    def __post_init__(self):
        if len(self.centers) != len(self.widths):
            raise ValueError("centers and widths must have equal length")
        if len(self.centers) == 0:
            raise ValueError("mixture needs at least one component")
        if any(c < 0 for c in self.centers):
            raise ValueError("mixture centers must be non-negative")
        if any(w <= 0 for w in self.widths):
            raise ValueError("mixture widths must be positive")
        if self.envelope not in (LINEAR_EXP, QUADRATIC_EXP):
            raise ValueError(f"unknown envelope kind {self.envelope!r}")
        if self.envelope_beta < 0:
            raise ValueError("envelope_beta must be non-negative")

    def density(self, k):
        k = _check_momentum(k)
        centers = np.asarray(self.centers)
        widths = np.asarray(self.widths)
        kk = k[..., None]
        comps = np.exp(-((kk - centers) ** 2) / (2 * widths)) / np.sqrt(
            2 * np.pi * widths
        )
        total = comps.sum(axis=-1)
        if self.envelope == LINEAR_EXP:
            env = np.exp(-self.envelope_beta * k)
        else:
            env = np.exp(-self.envelope_beta * k * k)
        out = env * total
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Planck:
    """Equilibrium per-mode photon occupation 1 / (exp(k/T) - 1).

    This is the bare Bose occupation number; the free-field mode count
    k^2 / pi^2 is accounted for in the radiation rate prefactor, which is
    what makes detailed balance (and hence the Gibbs fixed point) exact.
    Diverges like T/k as k -> 0.
    """

    temperature: float

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")

    def density(self, k):
        k = _check_momentum(k)
        kk = np.atleast_1d(k).astype(float)
        out = np.full_like(kk, np.inf)
        nz = kk > 0
        out[nz] = 1.0 / np.expm1(kk[nz] / self.temperature)
        return float(out[0]) if k.ndim == 0 else out


def boltzmann_normalization(beta: float, total_density: float, mass: float) -> float:
    """Prefactor C such that the 3-d integral of C exp(-beta k^2/2M) is n_tot."""
    if beta <= 0 or total_density <= 0 or mass <= 0:
        raise ValueError("beta, total_density and mass must all be positive")
    return total_density * (beta / (2 * np.pi * mass)) ** 1.5


@dataclass(frozen=True)
class BoltzmannGas:
    """Equilibrium gas momentum density C exp(-beta k^2 / 2M)."""

    beta: float
    total_density: float
    mass: float

    def __post_init__(self):
        # raises on non-positive parameters
        boltzmann_normalization(self.beta, self.total_density, self.mass)

    def density(self, k):
        k = _check_momentum(k)
        C = boltzmann_normalization(self.beta, self.total_density, self.mass)
        out = C * np.exp(-self.beta * k * k / (2 * self.mass))
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Vacuum:
    """Empty environment: n(k) = 0 everywhere."""

    def density(self, k):
        k = _check_momentum(k)
        return np.zeros_like(k) if k.ndim else 0.0


def sample_density(dist, k_min: float, k_max: float, n: int):
    """Uniform table of (k, n(k)) on [k_min, k_max], endpoints included."""
    if not (k_min < k_max):
        raise ValueError("need k_min < k_max")
    if n < 2:
        raise ValueError("need at least two sample points")
    k = np.linspace(k_min, k_max, n)
    return k, np.asarray(dist.density(k), dtype=float)
