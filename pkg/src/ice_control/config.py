"""Experiment configuration: one YAML document drives every CLI command.

The full schema is documented in the repository README.  Parsing is strict:
unknown keys are rejected, every validation error names the offending field,
and the fully-resolved configuration (defaults filled in) is kept for the run
summary so a run can be reproduced bit-exactly from its own artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .core import SystemSpec, check_density_matrix
from .distributions import (
    LINEAR_EXP,
    QUADRATIC_EXP,
    BoltzmannGas,
    Mixture,
    Planck,
    Vacuum,
)
from .dynamics import PropagationOptions
from .ga import GAConfig
from .gas import GasCoupling, QuadratureSpec
from .radiation import RadiationCoupling

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config"]

OPTIMIZE = "optimize"


class ConfigError(ValueError):
    pass


def _check_keys(d: dict, allowed: set[str], context: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"{context}: unknown key(s) {sorted(unknown)}")


def _require(d: dict, key: str, context: str):
    if key not in d:
        raise ConfigError(f"{context}: missing required key '{key}'")
    return d[key]


def _state_matrix(node, dim: int, context: str) -> np.ndarray:
    if not isinstance(node, dict):
        raise ConfigError(f"{context}: expected a mapping with 'diagonal' or 'matrix'")
    _check_keys(node, {"diagonal", "matrix"}, context)
    if ("diagonal" in node) == ("matrix" in node):
        raise ConfigError(f"{context}: give exactly one of 'diagonal' or 'matrix'")
    if "diagonal" in node:
        diag = np.asarray(node["diagonal"], dtype=float)
        if diag.shape != (dim,):
            raise ConfigError(f"{context}.diagonal: expected {dim} entries")
        rho = np.diag(diag).astype(complex)
    else:
        rho = np.asarray(node["matrix"], dtype=complex)
        if rho.shape != (dim, dim):
            raise ConfigError(f"{context}.matrix: expected a {dim}x{dim} matrix")
    try:
        check_density_matrix(rho)
    except ValueError as exc:
        raise ConfigError(f"{context}: not a valid density matrix ({exc})") from exc
    return rho


@dataclass
class ExperimentConfig:
    system: SystemSpec
    environment_kind: str  # "radiation" | "gas"
    radiation_coupling: RadiationCoupling | None
    gas_coupling: GasCoupling | None
    quadrature: QuadratureSpec | None
    distribution: object  # EnvDistribution, or the string "optimize"
    target: np.ndarray | None
    initial_state: np.ndarray
    ga: GAConfig | None
    dynamics: PropagationOptions
    seed: int
    output_dir: str | None
    sample_range: tuple[float, float, int]
    resolved: dict  # defaults-filled echo, re-feedable through parse_config

    @property
    def optimizing(self) -> bool:
        return self.distribution == OPTIMIZE


def load_config(path: str, seed_override: int | None = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    if seed_override is not None:
        raw["seed"] = int(seed_override)
    return parse_config(raw, source=path)


def _parse_system(node, context="system") -> SystemSpec:
    if not isinstance(node, dict):
        raise ConfigError(f"{context}: expected a mapping")
    _check_keys(node, {"energies", "dipole", "allow_diagonal_dipole"}, context)
    energies = _require(node, "energies", context)
    dipole = _require(node, "dipole", context)
    try:
        return SystemSpec(
            energies=np.asarray(energies, dtype=float),
            dipole=np.asarray(dipole, dtype=float),
            allow_diagonal_dipole=bool(node.get("allow_diagonal_dipole", False)),
        )
    except ValueError as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def _parse_environment(node, context="environment"):
    if not isinstance(node, dict):
        raise ConfigError(f"{context}: expected a mapping")
    kind = _require(node, "kind", context)
    if kind == "radiation":
        _check_keys(node, {"kind", "g0"}, context)
        try:
            coupling = RadiationCoupling(g0=float(node.get("g0", 1.0)))
        except ValueError as exc:
            raise ConfigError(f"{context}.g0: {exc}") from exc
        return kind, coupling, None, None
    if kind == "gas":
        _check_keys(node, {"kind", "strength", "mass", "windows", "quadrature"}, context)
        windows = _require(node, "windows", context)
        try:
            coupling = GasCoupling(
                windows=tuple((float(a), float(b)) for a, b in windows),
                strength=float(node.get("strength", 1.0)),
                mass=float(node.get("mass", 1.0)),
            )
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{context}: {exc}") from exc
        qnode = node.get("quadrature", {})
        _check_keys(qnode, {"k_min", "k_max", "nodes"}, f"{context}.quadrature")
        try:
            quad = QuadratureSpec(
                k_min=float(qnode.get("k_min", 0.0)),
                k_max=float(qnode.get("k_max", 40.0)),
                nodes=int(qnode.get("nodes", 600)),
            )
        except ValueError as exc:
            raise ConfigError(f"{context}.quadrature: {exc}") from exc
        return kind, None, coupling, quad
    raise ConfigError(f"{context}.kind: expected 'radiation' or 'gas', got {kind!r}")


def _parse_distribution(node, env_kind: str, context="distribution"):
    if node == OPTIMIZE:
        return OPTIMIZE
    if not isinstance(node, dict):
        raise ConfigError(f"{context}: expected 'optimize' or a mapping with 'kind'")
    kind = _require(node, "kind", context)
    try:
        if kind == "vacuum":
            _check_keys(node, {"kind"}, context)
            return Vacuum()
        if kind == "planck":
            _check_keys(node, {"kind", "temperature"}, context)
            return Planck(temperature=float(_require(node, "temperature", context)))
        if kind == "boltzmann":
            _check_keys(node, {"kind", "beta", "total_density", "mass"}, context)
            return BoltzmannGas(
                beta=float(_require(node, "beta", context)),
                total_density=float(_require(node, "total_density", context)),
                mass=float(_require(node, "mass", context)),
            )
        if kind == "mixture":
            _check_keys(
                node, {"kind", "centers", "widths", "envelope", "envelope_beta"}, context
            )
            default_env, default_beta = (
                (LINEAR_EXP, 0.05) if env_kind == "radiation" else (QUADRATIC_EXP, 0.01)
            )
            return Mixture(
                centers=tuple(float(c) for c in _require(node, "centers", context)),
                widths=tuple(float(w) for w in _require(node, "widths", context)),
                envelope=node.get("envelope", default_env),
                envelope_beta=float(node.get("envelope_beta", default_beta)),
            )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{context}: {exc}") from exc
    raise ConfigError(f"{context}.kind: unknown distribution kind {kind!r}")


def _parse_ga(node, seed: int, context="ga") -> GAConfig:
    if not isinstance(node, dict):
        raise ConfigError(f"{context}: expected a mapping")
    allowed = {
        "population_size",
        "bits_per_param",
        "n_components",
        "crossover_prob",
        "mutation_prob_per_bit",
        "elite_count",
        "generations",
        "k_range",
        "width_range",
    }
    _check_keys(node, allowed, context)
    kwargs = dict(node)
    if "k_range" in kwargs:
        kwargs["k_range"] = tuple(float(x) for x in kwargs["k_range"])
    if "width_range" in kwargs:
        kwargs["width_range"] = tuple(float(x) for x in kwargs["width_range"])
    try:
        return GAConfig(seed=seed, **kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def _parse_dynamics(node, context="dynamics") -> PropagationOptions:
    if not isinstance(node, dict):
        raise ConfigError(f"{context}: expected a mapping")
    _check_keys(node, {"dt", "t_max", "stop_tol", "record_every"}, context)
    try:
        return PropagationOptions(
            dt=None if node.get("dt") is None else float(node["dt"]),
            t_max=None if node.get("t_max") is None else float(node["t_max"]),
            stop_tol=float(node.get("stop_tol", 1e-9)),
            record_every=(
                None if node.get("record_every") is None else int(node["record_every"])
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def parse_config(raw: dict, source: str = "<config>") -> ExperimentConfig:
    allowed = {
        "system",
        "environment",
        "distribution",
        "target",
        "initial_state",
        "ga",
        "dynamics",
        "seed",
        "output_dir",
        "sample",
    }
    _check_keys(raw, allowed, source)
    system = _parse_system(_require(raw, "system", source))
    env_kind, rad, gasc, quad = _parse_environment(_require(raw, "environment", source))
    distribution = _parse_distribution(
        _require(raw, "distribution", source), env_kind
    )
    seed = int(raw.get("seed", 0))

    target = None
    if raw.get("target") is not None:
        target = _state_matrix(raw["target"], system.dim, "target")
    if raw.get("initial_state") is not None:
        initial = _state_matrix(raw["initial_state"], system.dim, "initial_state")
    else:
        initial = np.zeros((system.dim, system.dim), dtype=complex)
        initial[0, 0] = 1.0

    ga = None
    if distribution == OPTIMIZE:
        if target is None:
            raise ConfigError("optimize mode requires a 'target'")
        ga = _parse_ga(raw.get("ga", {}), seed)
    elif raw.get("ga") is not None:
        ga = _parse_ga(raw["ga"], seed)

    dynamics = _parse_dynamics(raw.get("dynamics", {}))

    sample = raw.get("sample", {})
    _check_keys(sample, {"k_min", "k_max", "points"}, "sample")
    sample_range = (
        float(sample.get("k_min", 0.0)),
        float(sample.get("k_max", 30.0)),
        int(sample.get("points", 601)),
    )
    if not sample_range[0] < sample_range[1] or sample_range[2] < 2:
        raise ConfigError("sample: need k_min < k_max and at least 2 points")

    resolved = _resolve(raw, system, env_kind, seed, sample_range, ga, dynamics)
    return ExperimentConfig(
        system=system,
        environment_kind=env_kind,
        radiation_coupling=rad,
        gas_coupling=gasc,
        quadrature=quad,
        distribution=distribution,
        target=target,
        initial_state=initial,
        ga=ga,
        dynamics=dynamics,
        seed=seed,
        output_dir=raw.get("output_dir"),
        sample_range=sample_range,
        resolved=resolved,
    )


def _resolve(raw, system, env_kind, seed, sample_range, ga, dynamics) -> dict:
    """Defaults-filled plain-dict echo of the configuration."""
    out = {
        "system": {
            "energies": [float(e) for e in system.energies],
            "dipole": [[float(x) for x in row] for row in system.dipole],
        },
        "environment": dict(raw["environment"]),
        "distribution": raw["distribution"],
        "seed": seed,
        "sample": {
            "k_min": sample_range[0],
            "k_max": sample_range[1],
            "points": sample_range[2],
        },
        "dynamics": {
            "dt": dynamics.dt,
            "t_max": dynamics.t_max,
            "stop_tol": dynamics.stop_tol,
            "record_every": dynamics.record_every,
        },
    }
    if system.allow_diagonal_dipole:
        out["system"]["allow_diagonal_dipole"] = True
    if raw.get("target") is not None:
        out["target"] = raw["target"]
    if raw.get("initial_state") is not None:
        out["initial_state"] = raw["initial_state"]
    if raw.get("output_dir") is not None:
        out["output_dir"] = raw["output_dir"]
    if ga is not None:
        out["ga"] = {
            "population_size": ga.population_size,
            "bits_per_param": ga.bits_per_param,
            "n_components": ga.n_components,
            "crossover_prob": ga.crossover_prob,
            "mutation_prob_per_bit": ga.mutation_prob_per_bit,
            "elite_count": ga.elite_count,
            "generations": ga.generations,
            "k_range": list(ga.k_range),
            "width_range": list(ga.width_range),
        }
    return out
