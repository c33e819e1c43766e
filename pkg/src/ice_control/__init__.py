"""Incoherent control by the environment: master-equation generators for a
finite-level system driven by shaped radiation or gas distributions, plus a
genetic-algorithm learning loop steering the steady state to a target."""

from .core import (
    SystemSpec,
    TransitionTable,
    build_transition_table,
    transition_operator,
    frobenius_distance,
    vectorize,
    devectorize,
    apply_superoperator,
    four_level_example,
)
from .distributions import (
    Mixture,
    Planck,
    BoltzmannGas,
    Vacuum,
    boltzmann_normalization,
    sample_density,
)
from .radiation import (
    RadiationCoupling,
    radiation_rates,
    build_radiation_liouvillian,
    radiation_pauli_rates,
)
from .gas import (
    GasCoupling,
    QuadratureSpec,
    GasKernel,
    energy_conserving_momentum,
    jump_operator,
    build_gas_liouvillian,
    pauli_rates,
    example_gas_coupling,
)
from .dynamics import (
    PropagationOptions,
    Trajectory,
    DriveWaveform,
    propagate,
    steady_state,
    pauli_propagate,
    AmbiguousSteadyStateError,
    IntegrationDivergedError,
)
from .ga import (
    GAConfig,
    Individual,
    ObjectiveSpec,
    GARun,
    Evaluator,
    run_ga,
    ga_step,
    decode_bits,
    decode_individual,
    random_population,
    roulette_draw,
    mutate,
)
from .config import ConfigError, ExperimentConfig, load_config, parse_config

__version__ = "0.1.0"
