"""
Distances, coverings and graph statistics
"""

from .graphs import (
    EXACT_DIAMETER_LIMIT,
    GraphDiameter,
    MetricReport,
    UniformMinimaResult,
    degree_tail_exponent,
    graph_diameter,
    graph_stats,
    uniform_minima_check,
)
from .trees import (
    DEFAULT_TRIM,
    CoveringReport,
    ball_scale,
    covering_number,
    dim_estimate,
    hausdorff_nested,
    tree_diameter,
    typical_distance,
)

__all__ = [
    'CoveringReport',
    'DEFAULT_TRIM',
    'EXACT_DIAMETER_LIMIT',
    'GraphDiameter',
    'MetricReport',
    'UniformMinimaResult',
    'ball_scale',
    'covering_number',
    'degree_tail_exponent',
    'dim_estimate',
    'graph_diameter',
    'graph_stats',
    'hausdorff_nested',
    'tree_diameter',
    'typical_distance',
    'uniform_minima_check',
]
