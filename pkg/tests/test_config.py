import copy

import numpy as np
import pytest

from ice_control import (
    BoltzmannGas,
    ConfigError,
    Mixture,
    Planck,
    Vacuum,
    load_config,
    parse_config,
)
from ice_control.distributions import LINEAR_EXP, QUADRATIC_EXP


def base_raw(**overrides):
    raw = {
        "system": {
            "energies": [0.0, 11.0, 13.0, 24.0],
            "dipole": [
                [0.0, 0.8, 0.3, 0.5],
                [0.8, 0.0, 0.2, 0.7],
                [0.3, 0.2, 0.0, 1.0],
                [0.5, 0.7, 1.0, 0.0],
            ],
        },
        "environment": {"kind": "radiation", "g0": 1.0},
        "distribution": {"kind": "planck", "temperature": 10.0},
    }
    raw.update(overrides)
    return raw


class TestShippedConfigs:
    def test_radiation_optimize_config(self):
        cfg = load_config("configs/radiation_target_3322.yaml")
        assert cfg.environment_kind == "radiation"
        assert cfg.optimizing
        assert cfg.ga is not None and cfg.ga.generations == 100
        assert np.allclose(np.diag(cfg.target).real, [0.3, 0.3, 0.2, 0.2])
        assert np.allclose(cfg.initial_state, np.diag([1, 0, 0, 0]))

    def test_gas_optimize_config(self):
        cfg = load_config("configs/gas_target_4141.yaml")
        assert cfg.environment_kind == "gas"
        assert cfg.gas_coupling.windows == ((2, 12), (9, 24), (3, 17), (14, 26))
        assert cfg.quadrature.nodes == 600
        assert np.allclose(np.diag(cfg.target).real, [0.4, 0.1, 0.4, 0.1])

    def test_fixed_distribution_configs(self):
        planck = load_config("configs/planck_equilibrium.yaml")
        assert isinstance(planck.distribution, Planck)
        assert not planck.optimizing
        gas = load_config("configs/boltzmann_gas.yaml")
        assert isinstance(gas.distribution, BoltzmannGas)

    def test_seed_override(self):
        cfg = load_config("configs/radiation_target_3322.yaml", seed_override=42)
        assert cfg.seed == 42
        assert cfg.ga.seed == 42


class TestValidation:
    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="bogus"):
            parse_config(base_raw(bogus=1))

    def test_unknown_nested_key(self):
        raw = base_raw()
        raw["environment"]["frequency_cutoff"] = 10
        with pytest.raises(ConfigError, match="frequency_cutoff"):
            parse_config(raw)

    def test_missing_system(self):
        raw = base_raw()
        del raw["system"]
        with pytest.raises(ConfigError, match="system"):
            parse_config(raw)

    def test_bad_environment_kind(self):
        raw = base_raw(environment={"kind": "plasma"})
        with pytest.raises(ConfigError, match="kind"):
            parse_config(raw)

    def test_gas_requires_windows(self):
        raw = base_raw(environment={"kind": "gas"})
        with pytest.raises(ConfigError, match="windows"):
            parse_config(raw)

    def test_optimize_requires_target(self):
        raw = base_raw(distribution="optimize")
        with pytest.raises(ConfigError, match="target"):
            parse_config(raw)

    def test_ga_population_must_exceed_elites(self):
        raw = base_raw(
            distribution="optimize",
            target={"diagonal": [0.3, 0.3, 0.2, 0.2]},
            ga={"population_size": 2, "elite_count": 2},
        )
        with pytest.raises(ConfigError, match="population_size"):
            parse_config(raw)

    def test_invalid_target_state(self):
        raw = base_raw(target={"diagonal": [0.9, 0.9, 0.1, 0.1]})
        with pytest.raises(ConfigError, match="target"):
            parse_config(raw)

    def test_target_diagonal_wrong_length(self):
        raw = base_raw(target={"diagonal": [0.5, 0.5]})
        with pytest.raises(ConfigError, match="diagonal"):
            parse_config(raw)

    def test_unknown_distribution_kind(self):
        raw = base_raw(distribution={"kind": "maxwell"})
        with pytest.raises(ConfigError, match="maxwell"):
            parse_config(raw)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(str(tmp_path / "nope.yaml"))

    def test_sample_range(self):
        raw = base_raw(sample={"k_min": 5.0, "k_max": 5.0})
        with pytest.raises(ConfigError, match="sample"):
            parse_config(raw)


class TestParsing:
    def test_ga_omitted_for_fixed_distribution(self):
        cfg = parse_config(base_raw())
        assert cfg.ga is None
        assert not cfg.optimizing

    def test_defaults(self):
        cfg = parse_config(base_raw())
        assert cfg.seed == 0
        assert cfg.sample_range == (0.0, 30.0, 601)
        assert np.allclose(cfg.initial_state, np.diag([1, 0, 0, 0]))
        assert cfg.dynamics.dt is None and cfg.dynamics.t_max is None

    def test_full_matrix_state(self):
        raw = base_raw(
            initial_state={
                "matrix": [
                    [0.5, 0.5, 0, 0],
                    [0.5, 0.5, 0, 0],
                    [0, 0, 0, 0],
                    [0, 0, 0, 0],
                ]
            }
        )
        cfg = parse_config(raw)
        assert cfg.initial_state[0, 1] == 0.5

    def test_mixture_envelope_defaults_follow_environment(self):
        raw = base_raw(
            distribution={"kind": "mixture", "centers": [5.0], "widths": [1.0]}
        )
        assert parse_config(raw).distribution.envelope == LINEAR_EXP
        raw_gas = base_raw(
            environment={
                "kind": "gas",
                "windows": [[2, 12], [9, 24], [3, 17], [14, 26]],
            },
            distribution={"kind": "mixture", "centers": [5.0], "widths": [1.0]},
        )
        assert parse_config(raw_gas).distribution.envelope == QUADRATIC_EXP

    def test_vacuum(self):
        cfg = parse_config(base_raw(distribution={"kind": "vacuum"}))
        assert isinstance(cfg.distribution, Vacuum)


class TestEcho:
    def test_echo_is_refeedable_and_closed(self):
        raw = base_raw(
            distribution="optimize",
            target={"diagonal": [0.3, 0.3, 0.2, 0.2]},
            ga={"generations": 7},
            seed=5,
            output_dir="runs/x",
        )
        cfg = parse_config(raw)
        echo = copy.deepcopy(cfg.resolved)
        cfg2 = parse_config(echo)
        assert cfg2.seed == cfg.seed
        assert cfg2.ga == cfg.ga
        assert np.array_equal(cfg2.system.energies, cfg.system.energies)
        assert np.array_equal(cfg2.target, cfg.target)
        assert cfg2.sample_range == cfg.sample_range
        # re-feeding the echo's own echo is a fixed point
        assert cfg2.resolved == cfg.resolved

    def test_echo_carries_defaults(self):
        cfg = parse_config(base_raw())
        assert cfg.resolved["sample"] == {"k_min": 0.0, "k_max": 30.0, "points": 601}
        assert cfg.resolved["seed"] == 0
