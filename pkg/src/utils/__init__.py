"""
Random streams and statistical helpers
"""

from .rng import (
    MAX_SEED,
    STREAM_BRANCHING,
    STREAM_CHECKS,
    STREAM_ENSEMBLE,
    STREAM_OUTSIDE,
    STREAM_PAIRS,
    STREAM_POISSON,
    STREAM_UNIFORMS,
    STREAM_WALK,
    derive_seed,
    substream,
)
from .stats import FitResult, empirical_law, loglog_fit, mc_standard_error, tv_distance

__all__ = [
    'FitResult',
    'MAX_SEED',
    'STREAM_BRANCHING',
    'STREAM_CHECKS',
    'STREAM_ENSEMBLE',
    'STREAM_OUTSIDE',
    'STREAM_PAIRS',
    'STREAM_POISSON',
    'STREAM_UNIFORMS',
    'STREAM_WALK',
    'derive_seed',
    'empirical_law',
    'loglog_fit',
    'mc_standard_error',
    'substream',
    'tv_distance',
]
