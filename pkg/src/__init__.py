"""
Heavy-tailed MST Lab - Source Package
"""

from .config import ConfigError, ConfigManager, ExperimentConfig
from .experiments import RUNNERS, ExperimentResult, ReplicaRunner, ValidationSuite
from .graphgen import PercolationEnsemble, SparseGraph, sample_ensemble
from .mst import TreeStructure, kruskal, mst_of_giant
from .weights import WeightFileError, WeightSequence, build_power_law, derived_stats

__all__ = [
    'ConfigError',
    'ConfigManager',
    'ExperimentConfig',
    'ExperimentResult',
    'PercolationEnsemble',
    'RUNNERS',
    'ReplicaRunner',
    'SparseGraph',
    'TreeStructure',
    'ValidationSuite',
    'WeightFileError',
    'WeightSequence',
    'build_power_law',
    'derived_stats',
    'kruskal',
    'mst_of_giant',
    'sample_ensemble',
]
