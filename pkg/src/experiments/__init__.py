"""
Experiment orchestration: replica runner, CSV emission and the experiment subcommands
"""

from .common import ExperimentResult, weight_sequences
from .critical_window import run_critical_window, summarize_window, window_flags, window_replica
from .dimension import dimension_replica, path_tree, run_dimension
from .generate import generate_replica, mst_replica, run_generate, run_mst
from .output import format_value, plot_loglog, read_csv, render_csv, write_csv
from .runner import ReplicaJob, ReplicaOutcome, ReplicaRunner, collect_rows
from .scaling import SLOPE_TOLERANCE, run_scaling, scaling_replica
from .validation import CheckResult, ValidationSuite, mc_tolerance, run_validate

RUNNERS = {
    "generate": run_generate,
    "mst": run_mst,
    "scaling": run_scaling,
    "critical-window": run_critical_window,
    "dimension": run_dimension,
    "validate": run_validate,
}

__all__ = [
    'CheckResult',
    'ExperimentResult',
    'RUNNERS',
    'ReplicaJob',
    'ReplicaOutcome',
    'ReplicaRunner',
    'SLOPE_TOLERANCE',
    'ValidationSuite',
    'collect_rows',
    'dimension_replica',
    'format_value',
    'generate_replica',
    'mc_tolerance',
    'mst_replica',
    'path_tree',
    'plot_loglog',
    'read_csv',
    'render_csv',
    'run_critical_window',
    'run_dimension',
    'run_generate',
    'run_mst',
    'run_scaling',
    'run_validate',
    'scaling_replica',
    'summarize_window',
    'weight_sequences',
    'window_flags',
    'window_replica',
    'write_csv',
]
