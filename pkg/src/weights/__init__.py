"""
Weight sequences and derived scalars
"""

from .sequence import (
    AssumptionReport,
    DerivedStats,
    RescaledView,
    ScalingConstants,
    WeightFileError,
    WeightSequence,
    WeightSequenceError,
    as_weight_array,
    build_from_cdf,
    build_iid,
    build_power_law,
    check_assumptions,
    derived_stats,
    lambda_for_p,
    p_lambda,
)

__all__ = [
    'AssumptionReport',
    'DerivedStats',
    'RescaledView',
    'ScalingConstants',
    'WeightFileError',
    'WeightSequence',
    'WeightSequenceError',
    'as_weight_array',
    'build_from_cdf',
    'build_iid',
    'build_power_law',
    'check_assumptions',
    'derived_stats',
    'lambda_for_p',
    'p_lambda',
]
