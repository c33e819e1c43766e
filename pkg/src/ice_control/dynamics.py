"""Time propagation, direct steady-state solution, and the rate-equation oracle.

Propagation uses classic fixed-step 4th-order integration.  For a constant
generator the RK4 update of the linear system v' = L v is exactly the
degree-4 Taylor polynomial of exp(dt L) applied to v, so the integrator is
realized as a precomputed step matrix; ``record_every`` steps are fused into
one matrix power per recorded sample.  A time-dependent drive falls back to
the explicit stage-by-stage scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import apply_superoperator, commutator_superoperator, devectorize, vectorize

__all__ = [
    "PropagationOptions",
    "Trajectory",
    "PauliTrajectory",
    "GapReport",
    "DriveWaveform",
    "IntegrationDivergedError",
    "AmbiguousSteadyStateError",
    "propagate",
    "steady_state",
    "pauli_propagate",
]


class IntegrationDivergedError(RuntimeError):
    """Propagation produced a non-finite state."""

    def __init__(self, time: float):
        super().__init__(f"integration diverged at t = {time:.6g}")
        self.time = time


class AmbiguousSteadyStateError(RuntimeError):
    """The generator has more than one invariant state."""

    def __init__(self, report: "GapReport"):
        super().__init__(
            f"steady state is not unique (null-space dimension {report.null_dim})"
        )
        self.report = report


@dataclass(frozen=True)
class GapReport:
    """Null-space diagnostics of a generator, from its smallest singular values."""

    null_dim: int
    singular_values: np.ndarray
    threshold: float


@dataclass
class PropagationOptions:
    """Fixed-step integration controls; ``dt``/``t_max`` default from the generator.

    ``dt`` defaults to 0.05 / max-row-sum of |L| and ``t_max`` to 50x the
    slowest relaxation timescale of L.  ``record_every`` (steps per recorded
    sample) defaults to a stride that keeps roughly 500 samples regardless of
    stiffness.
    """

    dt: float | None = None
    t_max: float | None = None
    stop_tol: float = 1e-9
    record_every: int | None = None

    def __post_init__(self):
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_max is not None and self.t_max <= 0:
            raise ValueError("t_max must be positive")
        if self.stop_tol <= 0:
            raise ValueError("stop_tol must be positive")
        if self.record_every is not None and self.record_every < 1:
            raise ValueError("record_every must be at least 1")

    def stride(self, dt: float, t_max: float, target_samples: int = 500) -> int:
        if self.record_every is not None:
            return self.record_every
        n_steps = int(np.ceil(t_max / dt))
        return max(1, n_steps // target_samples)


@dataclass
class Trajectory:
    times: np.ndarray
    states: list[np.ndarray]
    converged: bool


@dataclass
class PauliTrajectory:
    times: np.ndarray
    probabilities: np.ndarray  # shape (len(times), d)
    converged: bool


@dataclass(frozen=True)
class DriveWaveform:
    """Sampled field amplitude eps(t) plus the dipole it couples through.

    Adds the commutator term -i[-mu eps(t), .] during propagation; linearly
    interpolated between samples, zero outside the sampled range.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    dipole: np.ndarray

    def amplitude(self, t: float) -> float:
        return float(np.interp(t, self.times, self.amplitudes, left=0.0, right=0.0))


def default_time_step(L: np.ndarray) -> float:
    norm = float(np.max(np.sum(np.abs(L), axis=1)))
    return 0.05 / norm if norm > 0 else 0.1


def default_horizon(L: np.ndarray, rate_floor: float = 1e-6) -> float:
    """50x the slowest relaxation timescale, from the generator's spectrum.

    Decay rates below ``rate_floor`` times the fastest rate are treated as
    exactly conserved when picking the horizon.
    """
    rates = np.abs(np.linalg.eigvals(L).real)
    fastest = rates.max() if rates.size else 0.0
    if fastest <= 0:
        return 10.0
    active = rates[rates > rate_floor * fastest]
    return 50.0 / float(active.min())


def _rk4_step_matrix(L: np.ndarray, dt: float) -> np.ndarray:
    X = dt * L
    eye = np.eye(L.shape[0], dtype=complex)
    R = eye + X
    P = X
    for k in (2, 3, 4):
        P = P @ X / k
        R = R + P
    return R


def _hermitize(v: np.ndarray, time: float, tol: float = 1e-9) -> np.ndarray:
    rho = devectorize(v)
    rho = (rho + rho.conj().T) / 2
    tr = np.trace(rho).real
    if not np.isfinite(tr) or abs(tr - 1.0) > tol:
        raise IntegrationDivergedError(time)
    return vectorize(rho / tr)


def propagate(
    L: np.ndarray,
    rho0: np.ndarray,
    opts: PropagationOptions | None = None,
    drive: DriveWaveform | None = None,
) -> Trajectory:
    """Integrate v' = L v (plus optional drive commutator) from ``rho0``.

    Stops early once the instantaneous ||d rho/dt||_F falls below
    ``opts.stop_tol``.  The generator annihilates the trace exactly, so any
    drift is floating-point roundoff: each recorded sample is re-Hermitized
    and trace-renormalized, and a per-sample drift above 1e-9 (far beyond
    roundoff for a stable step) raises :class:`IntegrationDivergedError`.
    """
    opts = opts or PropagationOptions()
    dt = opts.dt if opts.dt is not None else default_time_step(L)
    t_max = opts.t_max if opts.t_max is not None else default_horizon(L)
    v = vectorize(np.asarray(rho0, dtype=complex))
    if v.size != L.shape[1]:
        raise ValueError("state dimension does not match generator")

    times = [0.0]
    states = [devectorize(v).copy()]
    converged = bool(np.linalg.norm(L @ v) < opts.stop_tol) and drive is None

    if drive is None:
        stride = opts.stride(dt, t_max)
        S = np.linalg.matrix_power(_rk4_step_matrix(L, dt), stride)
        # fusing many exactly trace-preserving steps into one matrix power
        # accumulates roundoff in the trace row, so the divergence guard
        # loosens with the stride
        drift_tol = 1e-9 * max(1.0, 1e-4 * stride)
        t = 0.0
        while t < t_max and not converged:
            t += dt * stride
            v = _hermitize(S @ v, t, drift_tol)
            times.append(t)
            states.append(devectorize(v).copy())
            converged = bool(np.linalg.norm(L @ v) < opts.stop_tol)
    else:
        drive_comm = commutator_superoperator(drive.dipole)

        def rhs(t, v):
            return (L - drive.amplitude(t) * drive_comm) @ v

        t = 0.0
        step = 0
        stride = opts.stride(dt, t_max)
        while t < t_max and not converged:
            k1 = rhs(t, v)
            k2 = rhs(t + dt / 2, v + dt / 2 * k1)
            k3 = rhs(t + dt / 2, v + dt / 2 * k2)
            k4 = rhs(t + dt, v + dt * k3)
            t += dt
            v = _hermitize(v + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4), t)
            step += 1
            if step % stride == 0:
                times.append(t)
                states.append(devectorize(v).copy())
                converged = bool(np.linalg.norm(rhs(t, v)) < opts.stop_tol)
        if times[-1] != t:
            times.append(t)
            states.append(devectorize(v).copy())

    return Trajectory(times=np.array(times), states=states, converged=converged)


def steady_state(
    L: np.ndarray, null_tol: float = 1e-8
) -> tuple[np.ndarray, GapReport]:
    """Solve L v = 0 with Tr rho = 1 via a bordered least-squares system.

    Raises :class:`AmbiguousSteadyStateError` when the numerical null space of
    L has dimension greater than one (singular values below
    ``null_tol * ||L||``).
    """
    d2 = L.shape[0]
    d = int(round(np.sqrt(d2)))
    sv = np.linalg.svd(L, compute_uv=False)
    threshold = null_tol * (sv[0] if sv[0] > 0 else 1.0)
    null_dim = int(np.sum(sv < threshold))
    report = GapReport(
        null_dim=null_dim, singular_values=sv[-max(null_dim, 4):], threshold=threshold
    )
    if null_dim > 1:
        raise AmbiguousSteadyStateError(report)

    trace_row = np.zeros(d2, dtype=complex)
    trace_row[:: d + 1] = 1.0
    A = np.vstack([L, trace_row])
    b = np.zeros(d2 + 1, dtype=complex)
    b[-1] = 1.0
    v, *_ = np.linalg.lstsq(A, b, rcond=None)
    rho = devectorize(v)
    rho = (rho + rho.conj().T) / 2
    rho = rho / np.trace(rho).real
    return rho, report


def pauli_propagate(
    w: np.ndarray, p0: np.ndarray, opts: PropagationOptions | None = None
) -> PauliTrajectory:
    """Integrate dp_l/dt = 2 sum_n (w[l, n] p_n - w[n, l] p_l).

    ``w`` must be elementwise non-negative; ``p0`` a probability vector.
    """
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise ValueError("transition rates must be non-negative")
    p0 = np.asarray(p0, dtype=float)
    if np.any(p0 < 0) or abs(p0.sum() - 1.0) > 1e-9:
        raise ValueError("p0 must be a probability vector")
    M = 2.0 * (w - np.diag(w.sum(axis=0)))
    opts = opts or PropagationOptions()
    dt = opts.dt if opts.dt is not None else default_time_step(M)
    t_max = opts.t_max if opts.t_max is not None else default_horizon(M)
    stride = opts.stride(dt, t_max)
    S = np.linalg.matrix_power(_rk4_step_matrix(M.astype(complex), dt), stride)
    S = S.real

    p = p0.copy()
    times = [0.0]
    probs = [p.copy()]
    converged = bool(np.linalg.norm(M @ p) < opts.stop_tol)
    t = 0.0
    while t < t_max and not converged:
        p = S @ p
        t += dt * stride
        if not np.all(np.isfinite(p)):
            raise IntegrationDivergedError(t)
        times.append(t)
        probs.append(p.copy())
        converged = bool(np.linalg.norm(M @ p) < opts.stop_tol)
    return PauliTrajectory(
        times=np.array(times), probabilities=np.array(probs), converged=converged
    )
