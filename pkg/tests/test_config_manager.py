"""
Tests for ConfigManager and ExperimentConfig
"""

import pytest
import json
from pathlib import Path

from src.config.manager import (
    EXPERIMENTS,
    PROFILE_FULL,
    PROFILE_QUICK,
    ConfigError,
    ConfigManager,
    ExperimentConfig,
    with_overrides,
)

pytestmark = pytest.mark.unit


class TestConfigManager:
    """Test cases for ConfigManager class"""

    def test_load_existing_config(self, config_manager):
        """Test loading an existing configuration file"""
        assert config_manager.config["defaults"]["seed"] == 7
        assert config_manager.config["experiments"]["mst"]["lambdas"] == [1, 2, 4]

    def test_create_default_config_when_missing(self, temp_dir):
        """Test creating default config when file doesn't exist"""
        config_path = temp_dir / "nonexistent_config.json"

        manager = ConfigManager(config_path)

        assert config_path.exists()
        assert manager.config == manager.get_default_config()
        assert set(manager.config["experiments"]) == set(EXPERIMENTS)

    def test_default_config_is_valid(self, temp_dir):
        """Test that every default experiment section validates"""
        manager = ConfigManager(temp_dir / "config.json")
        for name in EXPERIMENTS:
            cfg = manager.build_experiment_config(name)
            assert cfg.name == name

    def test_default_file_matches_shipped_config(self, temp_dir):
        """Test that the shipped config.json holds the defaults"""
        shipped = Path(__file__).parent.parent / "config.json"
        with open(shipped, 'r') as f:
            data = json.load(f)
        assert data == ConfigManager(temp_dir / "config.json").get_default_config()

    def test_save_config(self, config_manager):
        """Test saving configuration"""
        config_manager.config["defaults"]["seed"] = 99
        config_manager.save_config()

        with open(config_manager.config_path, 'r') as f:
            saved_config = json.load(f)

        assert saved_config["defaults"]["seed"] == 99

    def test_update_config(self, config_manager):
        """Test updating configuration"""
        config_manager.update_config({"notes": "pilot run"})

        assert config_manager.config["notes"] == "pilot run"
        assert ConfigManager(config_manager.config_path).config["notes"] == "pilot run"

    def test_handle_corrupted_config(self, temp_dir):
        """Test handling corrupted config file"""
        config_path = temp_dir / "corrupted_config.json"
        with open(config_path, 'w') as f:
            f.write("invalid json content {")

        manager = ConfigManager(config_path)

        assert manager.config == manager.get_default_config()

    def test_corrupted_config_is_logged(self, temp_dir, mocker):
        """Test that the fallback to defaults is reported"""
        config_path = temp_dir / "corrupted_config.json"
        config_path.write_text("{")
        mock_logger = mocker.patch("src.config.manager.logger")

        ConfigManager(config_path)

        mock_logger.warning.assert_called_once()

    def test_runtime_settings_fill_missing_keys(self, temp_dir):
        """Test that missing defaults come from the built-in configuration"""
        config_path = temp_dir / "partial.json"
        with open(config_path, 'w') as f:
            json.dump({"defaults": {"seed": 5}}, f)

        settings = ConfigManager(config_path).get_runtime_settings()

        assert settings["seed"] == 5
        assert settings["tau"] == 3.5
        assert settings["kernel"] == "product-minus-ell"

    def test_unknown_experiment(self, config_manager):
        """Test that unknown experiment names are rejected"""
        with pytest.raises(ConfigError):
            config_manager.get_experiment_settings("percolate")


class TestBuildExperimentConfig:
    """Test cases for merging defaults, sections and overrides"""

    def test_section_overrides_defaults(self, config_manager):
        """Test that experiment sections take precedence over defaults"""
        cfg = config_manager.build_experiment_config("critical-window")

        assert cfg.n_values == (500,)
        assert cfg.lambdas == (1.0, 2.0, 4.0)
        assert cfg.replicas == 3
        assert cfg.seed == 7
        assert isinstance(cfg.out_dir, Path)

    def test_overrides_win_and_none_is_ignored(self, config_manager):
        """Test command-line overrides"""
        cfg = config_manager.build_experiment_config("mst", {"seed": 42, "replicas": None, "n_values": [200]})

        assert cfg.seed == 42
        assert cfg.replicas == 2
        assert cfg.n_values == (200,)

    def test_unknown_keys_are_kept_as_extra(self, config_manager):
        """Test that unrecognized settings are carried in extra"""
        cfg = config_manager.build_experiment_config("generate", {"comment": "smoke"})

        assert cfg.extra == {"comment": "smoke"}

    def test_bad_types(self, config_manager):
        """Test that unparseable values raise ConfigError"""
        with pytest.raises(ConfigError):
            config_manager.build_experiment_config("mst", {"replicas": "many"})

    @pytest.mark.parametrize("overrides", [
        {"tau": 4.5},
        {"tau": 3.0},
        {"c": 0},
        {"Delta": 0.75},
        {"kernel": "product"},
        {"replicas": 0},
        {"lambdas": [-1.0]},
        {"seed": -1},
        {"n_values": [1]},
        {"profile": "thorough"},
    ])
    def test_invalid_values(self, config_manager, overrides):
        """Test that out-of-range settings raise ConfigError"""
        with pytest.raises(ConfigError):
            config_manager.build_experiment_config("mst", overrides)

    def test_critical_window_needs_sorted_lambdas(self, config_manager):
        """Test the critical-window lambda list checks"""
        with pytest.raises(ConfigError):
            config_manager.build_experiment_config("critical-window", {"lambdas": [4, 2]})
        with pytest.raises(ConfigError):
            config_manager.build_experiment_config("critical-window", {"lambdas": []})

    def test_scaling_needs_a_wide_grid(self, config_manager):
        """Test the scaling n grid checks"""
        with pytest.raises(ConfigError):
            config_manager.build_experiment_config("scaling", {"n_values": [100, 200, 400]})
        with pytest.raises(ConfigError):
            config_manager.build_experiment_config("scaling", {"n_values": [1000, 2000, 3000, 4000]})

    def test_scaling_rejects_weights_file(self, config_manager, weights_file):
        """Test that scaling builds its own weights"""
        with pytest.raises(ConfigError):
            config_manager.build_experiment_config("scaling", {"weights_file": str(weights_file)})

    def test_weights_file_replaces_n_values(self, config_manager, weights_file):
        """Test that a weights file is accepted in place of n values"""
        cfg = config_manager.build_experiment_config("generate", {"weights_file": str(weights_file)})

        assert cfg.weights_file == weights_file

    def test_with_overrides_validates(self, config_manager):
        """Test that copies are validated again"""
        cfg = config_manager.build_experiment_config("generate")

        assert with_overrides(cfg, seed=3).seed == 3
        with pytest.raises(ConfigError):
            with_overrides(cfg, tau=5.0)

    def test_unknown_experiment_name(self):
        """Test that ExperimentConfig rejects unknown names"""
        with pytest.raises(ConfigError):
            ExperimentConfig(name="percolate", n_values=(10,))

    def test_validation_profile(self, config_manager, temp_dir):
        """The shipped validate section runs the full profile; tests use the quick one"""
        assert ExperimentConfig(name="validate", n_values=(100,)).profile == PROFILE_FULL
        assert ConfigManager(temp_dir / "fresh.json").build_experiment_config("validate").profile == PROFILE_FULL
        assert config_manager.build_experiment_config("validate").profile == PROFILE_QUICK
