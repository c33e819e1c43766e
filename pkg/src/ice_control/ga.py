"""Closed-loop optimizer: bitstring GA over mixture parameters.

Each individual is a bit vector encoding the centers and widths of a Gaussian
mixture; its objective is the distance between the steady state induced by the
decoded distribution and a target.  Selection is fitness-proportional with
fitness 1 / (J + 0.01), variation is single-point crossover plus independent
per-bit mutation, and the best individuals are carried over unchanged.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import SystemSpec, frobenius_distance
from .distributions import LINEAR_EXP, QUADRATIC_EXP, Mixture
from .dynamics import (
    AmbiguousSteadyStateError,
    IntegrationDivergedError,
    PropagationOptions,
    propagate,
    steady_state,
)
from .gas import GasCoupling, GasKernel, QuadratureSpec
from .radiation import RadiationCoupling, build_radiation_liouvillian

__all__ = [
    "GAConfig",
    "Individual",
    "ObjectiveSpec",
    "GARun",
    "Evaluator",
    "decode_bits",
    "decode_individual",
    "random_population",
    "ga_step",
    "run_ga",
    "roulette_draw",
    "mutate",
    "FITNESS_SHIFT",
]

FITNESS_SHIFT = 0.01


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 14
    bits_per_param: int = 20
    n_components: int = 10
    crossover_prob: float = 0.9
    mutation_prob_per_bit: float | None = None  # default 0.7 / bitstring length
    elite_count: int = 2
    generations: int = 100
    k_range: tuple[float, float] = (0.0, 30.0)
    width_range: tuple[float, float] = (0.01, 10.0)
    seed: int = 0

    def __post_init__(self):
        if self.population_size <= self.elite_count:
            raise ValueError("population_size must exceed elite_count")
        if self.elite_count < 0:
            raise ValueError("elite_count must be non-negative")
        if self.bits_per_param < 1 or self.n_components < 1:
            raise ValueError("bits_per_param and n_components must be positive")
        if not 0 <= self.crossover_prob <= 1:
            raise ValueError("crossover_prob must lie in [0, 1]")
        pm = self.bit_flip_prob
        if not 0 <= pm <= 1:
            raise ValueError("mutation_prob_per_bit must lie in [0, 1]")
        if not self.k_range[0] < self.k_range[1]:
            raise ValueError("k_range must be a non-empty interval")
        if not 0 < self.width_range[0] < self.width_range[1]:
            raise ValueError("width_range must be a positive non-empty interval")
        if self.generations < 1:
            raise ValueError("generations must be positive")

    @property
    def params_per_individual(self) -> int:
        return 2 * self.n_components

    @property
    def bitstring_length(self) -> int:
        return self.bits_per_param * self.params_per_individual

    @property
    def bit_flip_prob(self) -> float:
        if self.mutation_prob_per_bit is not None:
            return self.mutation_prob_per_bit
        return 0.7 / self.bitstring_length


@dataclass
class Individual:
    bits: np.ndarray  # uint8 vector of 0/1
    objective: float | None = None  # cached J


@dataclass(frozen=True)
class ObjectiveSpec:
    """What a GA individual is scored against.

    Exactly one of ``target`` (state-distance mode) or ``observables``
    (list of (Hermitian operator, target expectation) pairs) must be set.
    The environment kind fixes the dissipator and the mixture envelope:
    ``linear-exp`` with beta = 1/20 for radiation, ``quadratic-exp`` with
    beta = 0.01 for gas.
    """

    system: SystemSpec
    environment: str  # "radiation" | "gas"
    target: np.ndarray | None = None
    observables: tuple[tuple[np.ndarray, float], ...] | None = None
    radiation_coupling: RadiationCoupling = field(default_factory=RadiationCoupling)
    gas_coupling: GasCoupling | None = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    initial_state: np.ndarray | None = None  # default: ground state
    propagation: PropagationOptions | None = None

    def __post_init__(self):
        if self.environment not in ("radiation", "gas"):
            raise ValueError("environment must be 'radiation' or 'gas'")
        if (self.target is None) == (self.observables is None):
            raise ValueError("set exactly one of target / observables")
        if self.environment == "gas" and self.gas_coupling is None:
            raise ValueError("gas environment needs a gas_coupling")

    @property
    def envelope(self) -> tuple[str, float]:
        if self.environment == "radiation":
            return LINEAR_EXP, 1.0 / 20.0
        return QUADRATIC_EXP, 0.01

    def ground_state(self) -> np.ndarray:
        if self.initial_state is not None:
            return self.initial_state
        d = self.system.dim
        rho = np.zeros((d, d), dtype=complex)
        rho[0, 0] = 1.0
        return rho


def decode_bits(bits: np.ndarray, cfg: GAConfig) -> tuple[np.ndarray, np.ndarray]:
    """Map a bit vector to (centers, widths) via per-group linear scaling."""
    if bits.size != cfg.bitstring_length:
        raise ValueError(
            f"expected {cfg.bitstring_length} bits, got {bits.size}"
        )
    groups = bits.reshape(cfg.params_per_individual, cfg.bits_per_param)
    weights = 2 ** np.arange(cfg.bits_per_param - 1, -1, -1, dtype=np.int64)
    values = groups.astype(np.int64) @ weights
    frac = values / float(2**cfg.bits_per_param - 1)
    nc = cfg.n_components
    k_lo, k_hi = cfg.k_range
    d_lo, d_hi = cfg.width_range
    centers = k_lo + frac[:nc] * (k_hi - k_lo)
    widths = d_lo + frac[nc:] * (d_hi - d_lo)
    return centers, widths


def decode_individual(
    ind: Individual, cfg: GAConfig, envelope: str, envelope_beta: float
) -> Mixture:
    centers, widths = decode_bits(ind.bits, cfg)
    return Mixture(
        centers=tuple(centers),
        widths=tuple(widths),
        envelope=envelope,
        envelope_beta=envelope_beta,
    )


def random_population(cfg: GAConfig, rng: np.random.Generator) -> list[Individual]:
    return [
        Individual(bits=rng.integers(0, 2, size=cfg.bitstring_length, dtype=np.uint8))
        for _ in range(cfg.population_size)
    ]


class Evaluator:
    """Scores individuals; precomputes the distribution-independent physics."""

    def __init__(self, objective: ObjectiveSpec, cfg: GAConfig):
        self.objective = objective
        self.cfg = cfg
        self._kernel = None
        if objective.environment == "gas":
            self._kernel = GasKernel(
                objective.system, objective.gas_coupling, objective.quadrature
            )

    def liouvillian(self, dist) -> np.ndarray:
        if self._kernel is not None:
            return self._kernel.liouvillian(dist)
        return build_radiation_liouvillian(
            self.objective.system, dist, self.objective.radiation_coupling
        )

    def stationary_state(self, dist) -> np.ndarray:
        L = self.liouvillian(dist)
        try:
            rho, _ = steady_state(L)
            return rho
        except AmbiguousSteadyStateError:
            traj = propagate(
                L, self.objective.ground_state(), self.objective.propagation
            )
            return traj.states[-1]

    def score_mixture(self, mixture: Mixture) -> float:
        try:
            rho = self.stationary_state(mixture)
        except IntegrationDivergedError:
            return float("inf")
        obj = self.objective
        if obj.target is not None:
            return frobenius_distance(rho, obj.target)
        total = 0.0
        for theta, want in obj.observables:
            total += (float(np.trace(rho @ theta).real) - want) ** 2
        return float(np.sqrt(total))

    def __call__(self, ind: Individual) -> float:
        if ind.objective is None:
            envelope, beta = self.objective.envelope
            mixture = decode_individual(ind, self.cfg, envelope, beta)
            ind.objective = self.score_mixture(mixture)
        return ind.objective


def _fitness(objectives: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        f = 1.0 / (objectives + FITNESS_SHIFT)
    f[~np.isfinite(objectives)] = 0.0
    return f


def roulette_draw(fitness: np.ndarray, rng: np.random.Generator) -> int:
    """Fitness-proportional index draw; uniform if every fitness is zero."""
    total = fitness.sum()
    if total <= 0:
        return int(rng.integers(0, fitness.size))
    r = rng.uniform(0.0, total)
    return int(np.searchsorted(np.cumsum(fitness), r, side="right").clip(0, fitness.size - 1))


def mutate(bits: np.ndarray, prob: float, rng: np.random.Generator) -> np.ndarray:
    flips = rng.random(bits.size) < prob
    return np.where(flips, 1 - bits, bits).astype(np.uint8)


def ga_step(
    pop: list[Individual], cfg: GAConfig, rng: np.random.Generator
) -> list[Individual]:
    """One generation: elitism, roulette pairing, crossover, mutation.

    Every individual in ``pop`` must already carry a cached objective.
    """
    if any(ind.objective is None for ind in pop):
        raise ValueError("ga_step requires an evaluated population")
    objectives = np.array([ind.objective for ind in pop], dtype=float)
    order = np.argsort(objectives, kind="stable")
    next_pop = [
        Individual(bits=pop[i].bits.copy(), objective=pop[i].objective)
        for i in order[: cfg.elite_count]
    ]
    fitness = _fitness(objectives)
    pm = cfg.bit_flip_prob
    L = cfg.bitstring_length
    while len(next_pop) < cfg.population_size:
        pa = pop[roulette_draw(fitness, rng)].bits
        pb = pop[roulette_draw(fitness, rng)].bits
        if rng.random() < cfg.crossover_prob:
            point = int(rng.integers(1, L))
            child_a = np.concatenate([pa[:point], pb[point:]])
            child_b = np.concatenate([pb[:point], pa[point:]])
        else:
            child_a, child_b = pa.copy(), pb.copy()
        for child in (child_a, child_b):
            if len(next_pop) < cfg.population_size:
                next_pop.append(Individual(bits=mutate(child, pm, rng)))
    return next_pop


@dataclass
class GARun:
    """Per-generation history plus the winning individual."""

    best_j: np.ndarray
    avg_j: np.ndarray
    best_bits: np.ndarray
    best_params: Mixture
    config: GAConfig

    @property
    def generations(self) -> np.ndarray:
        return np.arange(self.best_j.size)


def _evaluate_all(pop: list[Individual], evaluator: Evaluator, workers: int) -> None:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(evaluator, pop))
    else:
        for ind in pop:
            evaluator(ind)


def run_ga(
    cfg: GAConfig,
    objective: ObjectiveSpec,
    workers: int | None = None,
    progress=None,
) -> GARun:
    """Full GA run; history row for the initial population and each generation.

    ``workers`` caps parallel objective evaluations (default: the
    ``ICE_THREADS`` environment variable, else serial).  Results are merged in
    population order, so runs are reproducible for any worker count.
    """
    if workers is None:
        workers = int(os.environ.get("ICE_THREADS", "1"))
    rng = np.random.default_rng(cfg.seed)
    evaluator = Evaluator(objective, cfg)
    pop = random_population(cfg, rng)

    best_hist: list[float] = []
    avg_hist: list[float] = []
    best_ind: Individual | None = None

    for gen in range(cfg.generations + 1):
        _evaluate_all(pop, evaluator, workers)
        objectives = np.array([ind.objective for ind in pop], dtype=float)
        i_best = int(np.argmin(objectives))
        finite = objectives[np.isfinite(objectives)]
        best_hist.append(float(objectives[i_best]))
        avg_hist.append(float(finite.mean()) if finite.size else float("inf"))
        if best_ind is None or objectives[i_best] < best_ind.objective:
            best_ind = Individual(
                bits=pop[i_best].bits.copy(), objective=pop[i_best].objective
            )
        if progress is not None:
            progress(gen, best_hist[-1], avg_hist[-1])
        if gen < cfg.generations:
            pop = ga_step(pop, cfg, rng)

    envelope, beta = objective.envelope
    return GARun(
        best_j=np.array(best_hist),
        avg_j=np.array(avg_hist),
        best_bits=best_ind.bits,
        best_params=decode_individual(best_ind, cfg, envelope, beta),
        config=cfg,
    )
