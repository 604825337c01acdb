"""
Tests for algorithm specs, run configs and config file loading.
"""

import json
from datetime import datetime
from pathlib import Path

import pytest
import yaml
from pydantic import ValidationError

from demandvalue.config_loader import ConfigLoader
from demandvalue.errors import ConfigError
from demandvalue.schemas import AlgorithmSpec, RunConfig


class TestAlgorithmSpec:
    def test_exact_needs_no_seed(self):
        spec = AlgorithmSpec(name="exact")

        assert not spec.stochastic
        assert spec.sampler == "exact"
        assert spec.params() == {"seed": None}

    def test_stochastic_needs_seed(self):
        with pytest.raises(ValidationError, match="needs a seed"):
            AlgorithmSpec(name="rs")

    @pytest.mark.parametrize(
        ("name", "sampler", "truncated"),
        [("mc", "mc", False), ("tmc", "mc", True), ("trs", "rs", True), ("ss", "ss", False)],
    )
    def test_sampler(self, name, sampler, truncated):
        spec = AlgorithmSpec(name=name, seed=1)

        assert spec.sampler == sampler
        assert spec.truncated is truncated

    def test_params(self):
        assert AlgorithmSpec(name="tss", rounds=8, tau=0.8, seed=3).params() == {
            "seed": 3,
            "rounds": 8,
            "tau": 0.8,
        }
        assert AlgorithmSpec(name="mc", convergence_threshold=0.05, seed=3).params() == {
            "seed": 3,
            "convergence_threshold": 0.05,
        }

    def test_with_seed_copies(self):
        spec = AlgorithmSpec(name="ss", seed=1)

        assert spec.with_seed(9).seed == 9
        assert spec.seed == 1

    def test_rejects_unknown_algorithm(self):
        with pytest.raises(ValidationError):
            AlgorithmSpec(name="kernel", seed=1)

    def test_rejects_bad_tau(self):
        with pytest.raises(ValidationError):
            AlgorithmSpec(name="tss", tau=1.5, seed=1)


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()

        assert config.schema_name == "generic"
        assert config.algo == "exact"
        assert config.metrics == ["cossim", "numsim", "rdtw"]
        assert config.reps == 50
        assert config.thresholds == [0.1, 0.2]

    def test_aliases(self):
        config = RunConfig.model_validate(
            {"schema": "chicago", "from": "2019-03-04", "to": "2019-04-01"}
        )

        assert config.schema_name == "chicago"
        assert config.date_from == datetime(2019, 3, 4)
        assert config.date_to == datetime(2019, 4, 1)

    def test_aware_datetimes_become_naive_utc(self):
        config = RunConfig.model_validate({"control_start": "2019-03-18T06:00:00+06:00"})

        assert config.control_start == datetime(2019, 3, 18, 0, 0)

    def test_window_order(self):
        with pytest.raises(ValidationError, match="before 'to'"):
            RunConfig.model_validate({"from": "2019-04-01", "to": "2019-03-01"})

    def test_control_inside_window(self):
        with pytest.raises(ValidationError, match="control_start must be before"):
            RunConfig.model_validate(
                {"from": "2019-03-01", "to": "2019-04-01", "control_start": "2019-05-01"}
            )

    def test_stochastic_needs_seed(self):
        with pytest.raises(ValidationError, match="seed is required"):
            RunConfig(algo="tss")
        with pytest.raises(ValidationError, match="seed is required"):
            RunConfig(algorithms=["exact", "rs"])

    @pytest.mark.parametrize(
        "values",
        [
            {"metric": "mape"},
            {"forecaster": "prophet"},
            {"normalization": "zscore"},
            {"metrics": []},
            {"taus": [0.5, 1.2]},
            {"colour": "red"},
        ],
    )
    def test_invalid_values(self, values):
        with pytest.raises(ValidationError):
            RunConfig.model_validate(values)

    def test_algorithm_spec(self):
        config = RunConfig(algo="tss", rounds=16, tau=0.8, seed=5)

        spec = config.algorithm_spec()
        assert (spec.name, spec.rounds, spec.tau, spec.seed) == ("tss", 16, 0.8, 5)
        assert config.algorithm_spec("rs", seed=9).seed == 9

    def test_manifest_round_trip(self):
        config = RunConfig.model_validate(
            {"schema": "synthetic", "input": "multi-zone", "algo": "ss", "seed": 4}
        )

        manifest = config.to_manifest()
        assert manifest["schema"] == "synthetic"
        assert RunConfig.model_validate(manifest) == config


class TestConfigLoader:
    def setup_method(self):
        self.loader = ConfigLoader()

    def test_resolve_layers(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(yaml.safe_dump({"algo": "ss", "seed": 3, "rounds": 8, "workers": 2}))

        config = self.loader.resolve(
            path,
            overrides={"rounds": 16, "seed": None},
            defaults={"workers": 4, "out": "elsewhere"},
        )

        assert config.rounds == 16
        assert config.seed == 3
        assert config.workers == 2
        assert config.out == "elsewhere"

    def test_manifest_config_block(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"command": "value", "config": {"algo": "rs", "seed": 2}}))

        config = self.loader.resolve(path)

        assert config.algo == "rs"
        assert config.seed == 2

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")

        assert self.loader.resolve(path) == RunConfig()

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            self.loader.load_file(tmp_path / "absent.yaml")

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("algo: [ss\n")

        with pytest.raises(ConfigError, match="Error parsing"):
            self.loader.load_file(path)

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")

        with pytest.raises(ConfigError, match="must hold a mapping"):
            self.loader.load_file(path)

    def test_validation_errors_listed(self):
        with pytest.raises(ConfigError, match="Invalid run configuration") as info:
            self.loader.resolve(overrides={"algo": "rs", "reps": 0})

        fields = {problem["field"] for problem in info.value.details["errors"]}
        assert "reps" in fields

    def test_load_preset(self, tmp_path):
        (tmp_path / "demo.yaml").write_text("metric: numsim\n")

        assert ConfigLoader(tmp_path).load_preset("demo") == {"metric": "numsim"}

    def test_resolve_by_preset_name(self, tmp_path):
        (tmp_path / "demo.yaml").write_text("metric: numsim\nseed: 4\n")

        config = ConfigLoader(tmp_path).resolve("demo", overrides={"seed": 9})

        assert config.metric == "numsim"
        assert config.seed == 9

    def test_unknown_preset_name(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            ConfigLoader(tmp_path).resolve("absent")


class TestPresets:
    config_dir = Path(__file__).resolve().parent.parent / "config"

    @pytest.mark.parametrize("name", ["synthetic_demo", "chicago_city", "chicago_drivers"])
    def test_presets_are_valid(self, name):
        loader = ConfigLoader(self.config_dir)

        config = loader.resolve(self.config_dir / f"{name}.yaml")

        assert config.forecaster == "seasonal_profile"
        assert loader.load_preset(name)

    def test_chicago_window(self):
        config = ConfigLoader().resolve(self.config_dir / "chicago_city.yaml")

        assert config.schema_name == "chicago"
        assert config.date_from < config.control_start < config.date_to
        assert config.top_k == 15
