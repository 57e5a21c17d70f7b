# Config module
from .manager import (
    EXPERIMENTS,
    PROFILE_FULL,
    PROFILE_QUICK,
    VALIDATION_PROFILES,
    ConfigError,
    ConfigManager,
    ExperimentConfig,
    with_overrides,
)

__all__ = [
    'ConfigError',
    'ConfigManager',
    'EXPERIMENTS',
    'ExperimentConfig',
    'PROFILE_FULL',
    'PROFILE_QUICK',
    'VALIDATION_PROFILES',
    'with_overrides',
]
