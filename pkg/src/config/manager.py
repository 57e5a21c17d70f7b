"""
Configuration management for the simulation laboratory
"""

import copy
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from loguru import logger

from ..graphgen import KERNEL_MINUS_ELL, KERNEL_TAGS
from ..utils.rng import MAX_SEED

EXPERIMENTS = ("generate", "mst", "scaling", "critical-window", "dimension", "validate")

# Validation profiles: published sample sizes, or cfg.trials with widened thresholds
PROFILE_FULL = "full"
PROFILE_QUICK = "quick"
VALIDATION_PROFILES = (PROFILE_FULL, PROFILE_QUICK)


class ConfigError(ValueError):
    """Raised for invalid or inconsistent experiment settings"""


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated, immutable inputs of one experiment run"""
    name: str
    n_values: Tuple[int, ...]
    tau: float = 3.5
    c: float = 3.0
    kernel: str = KERNEL_MINUS_ELL
    lambdas: Tuple[float, ...] = ()
    Delta: float = 0.25
    delta1: float = 0.1
    replicas: int = 1
    pairs: int = 64
    seed: int = 1
    out_dir: Path = Path("results")
    scale_grid: Tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64)
    trim: int = 2
    trials: int = 1000
    profile: str = PROFILE_FULL
    threads: int = 1
    edge_cap: Optional[float] = 50_000_000
    population_budget: int = 1_000_000
    mass_multipliers: Tuple[float, ...] = (0.5, 1.0, 2.0, 4.0)
    weights_file: Optional[Path] = None
    plot: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.name!r}; expected one of {EXPERIMENTS}")
        if not 3.0 < self.tau < 4.0:
            raise ConfigError(f"tau must lie in (3, 4), got {self.tau}")
        if not 0.0 < self.Delta <= 0.5:
            raise ConfigError(f"Delta must lie in (0, 1/2], got {self.Delta}")
        if self.c <= 0:
            raise ConfigError(f"c must be positive, got {self.c}")
        if self.delta1 < 0:
            raise ConfigError(f"delta1 must be nonnegative, got {self.delta1}")
        if any(lam < 0 or not math.isfinite(lam) for lam in self.lambdas):
            raise ConfigError(f"lambdas must be finite and nonnegative, got {self.lambdas}")
        if not 0 <= self.seed < MAX_SEED:
            raise ConfigError(f"seed must be a 64-bit unsigned value, got {self.seed}")
        if self.kernel not in KERNEL_TAGS:
            raise ConfigError(f"unknown kernel {self.kernel!r}; expected one of {KERNEL_TAGS}")
        for key in ("replicas", "pairs", "trials", "threads", "population_budget"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be at least 1, got {getattr(self, key)}")
        if self.profile not in VALIDATION_PROFILES:
            raise ConfigError(f"unknown validation profile {self.profile!r}; expected one of {VALIDATION_PROFILES}")
        if self.trim < 0:
            raise ConfigError(f"trim must be nonnegative, got {self.trim}")
        if self.weights_file is None and (not self.n_values or min(self.n_values) < 2):
            raise ConfigError(f"n values must all be at least 2, got {self.n_values}")

        if self.name == "critical-window":
            if not self.lambdas:
                raise ConfigError("critical-window needs a lambda list")
            if list(self.lambdas) != sorted(self.lambdas):
                raise ConfigError(f"critical-window lambdas must be sorted ascending, got {self.lambdas}")
        if self.name == "scaling":
            if self.weights_file is not None:
                raise ConfigError("scaling builds one weight sequence per n and takes no weights file")
            if len(set(self.n_values)) < 4:
                raise ConfigError(f"scaling needs at least 4 distinct n values, got {self.n_values}")
            if math.log10(max(self.n_values) / min(self.n_values)) < 1.2:
                raise ConfigError(f"scaling n values must span at least 1.2 decades, got {self.n_values}")


class ConfigManager:
    """Manages experiment configuration"""

    def __init__(self, config_path: Optional[Path] = None):
        self.config_path = Path(config_path) if config_path else Path.cwd() / "config.json"
        self.config = self.load_config()

    def load_config(self) -> Dict:
        """Load configuration from JSON file"""
        if not self.config_path.exists():
            self.create_default_config()

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (json.JSONDecodeError, FileNotFoundError):
            logger.warning(f"Could not read {self.config_path}; using the default configuration")
            return self.get_default_config()

    def get_default_config(self) -> Dict:
        """Get default configuration"""
        return {
            "defaults": {
                "seed": 1,
                "tau": 3.5,
                "c": 3.0,
                "kernel": KERNEL_MINUS_ELL,
                "replicas": 10,
                "pairs": 64,
                "threads": 1,
                "edge_cap": 50000000,
                "population_budget": 1000000,
                "out_dir": "results"
            },
            "experiments": {
                "generate": {"n_values": [10000], "replicas": 1},
                "mst": {"n_values": [10000], "lambdas": [5, 10, 20, 40], "replicas": 2},
                "scaling": {
                    "n_values": [4096, 8192, 16384, 32768, 65536, 131072],
                    "replicas": 20,
                    "pairs": 64
                },
                "critical-window": {
                    "n_values": [100000],
                    "lambdas": [5, 10, 20, 40],
                    "Delta": 0.25,
                    "delta1": 0.1,
                    "replicas": 10,
                    "mass_multipliers": [0.5, 1.0, 2.0, 4.0]
                },
                "dimension": {
                    "n_values": [100000],
                    "scale_grid": [1, 2, 4, 8, 16, 32, 64],
                    "trim": 2,
                    "replicas": 2
                },
                "validate": {"n_values": [100], "profile": PROFILE_FULL, "trials": 20000, "replicas": 1}
            }
        }

    def create_default_config(self):
        """Create default configuration file"""
        config = self.get_default_config()
        self.config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_path, 'w', encoding='utf-8') as f:
            json.dump(config, f, indent=4)

    def save_config(self):
        """Save current configuration to file"""
        with open(self.config_path, 'w', encoding='utf-8') as f:
            json.dump(self.config, f, indent=4)

    def get_runtime_settings(self) -> Dict:
        """Settings shared by every experiment"""
        defaults = self.get_default_config()["defaults"]
        return {**defaults, **self.config.get("defaults", {})}

    def get_experiment_settings(self, name: str) -> Dict:
        """Per-experiment section, empty when absent"""
        if name not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {name!r}; expected one of {EXPERIMENTS}")
        return copy.deepcopy(self.config.get("experiments", {}).get(name, {}))

    def update_config(self, updates: Dict):
        """Update configuration with new values"""
        self.config.update(updates)
        self.save_config()

    def build_experiment_config(self, name: str, overrides: Optional[Dict] = None) -> ExperimentConfig:
        """
        Merge defaults, the experiment section and command-line overrides

        Overrides set to None are ignored.

        Raises:
            ConfigError: if a value has the wrong type or fails validation
        """
        settings = {**self.get_runtime_settings(), **self.get_experiment_settings(name)}
        settings.update({k: v for k, v in (overrides or {}).items() if v is not None})

        known = set(ExperimentConfig.__dataclass_fields__) - {"name", "extra"}
        extra = {k: v for k, v in settings.items() if k not in known}
        if extra:
            logger.debug(f"Unused settings for {name}: {sorted(extra)}")

        try:
            values = {k: v for k, v in settings.items() if k in known}
            for key in ("n_values", "scale_grid"):
                if key in values:
                    values[key] = tuple(int(v) for v in values[key])
            for key in ("lambdas", "mass_multipliers"):
                if key in values:
                    values[key] = tuple(float(v) for v in values[key])
            for key in ("seed", "replicas", "pairs", "trials", "threads", "population_budget", "trim"):
                if key in values:
                    values[key] = int(values[key])
            for key in ("tau", "c", "Delta", "delta1"):
                if key in values:
                    values[key] = float(values[key])
            if values.get("edge_cap") is not None:
                values["edge_cap"] = float(values["edge_cap"])
            if "profile" in values:
                values["profile"] = str(values["profile"])
            if "out_dir" in values:
                values["out_dir"] = Path(values["out_dir"])
            if values.get("weights_file"):
                values["weights_file"] = Path(values["weights_file"])
            if "plot" in values:
                values["plot"] = bool(values["plot"])
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid setting for {name}: {e}") from None

        if "n_values" not in values and values.get("weights_file") is None:
            raise ConfigError(f"no n values configured for {name}")
        values.setdefault("n_values", ())
        return ExperimentConfig(name=name, extra=extra, **values)


def with_overrides(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    """Copy of ``cfg`` with validated changes"""
    return replace(cfg, **changes)
