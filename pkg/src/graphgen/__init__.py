"""
Random graph models, the percolation ensemble and component labelling
"""

from .ensemble import (
    DEFAULT_EDGE_CAP,
    KERNEL_FULL_L,
    KERNEL_MINUS_ELL,
    KERNEL_TAGS,
    EdgeBudgetExceeded,
    PercolationEnsemble,
    expected_edge_count,
    kernel_denominator,
    sample_ensemble,
)
from .graph import ComponentPartition, GiantRecord, SparseGraph, components, giant
from .models import (
    KernelCouplingReport,
    expected_poisson_edges,
    kernel_coupling_tv,
    kernel_discrepancy,
    outside_vertices,
    poisson_p_for_time,
    sample_outside_graph,
    sample_poisson_graph,
)
from .sampling import BLOCK_SIZE, edge_moments

__all__ = [
    'BLOCK_SIZE',
    'ComponentPartition',
    'DEFAULT_EDGE_CAP',
    'EdgeBudgetExceeded',
    'GiantRecord',
    'KERNEL_FULL_L',
    'KERNEL_MINUS_ELL',
    'KERNEL_TAGS',
    'KernelCouplingReport',
    'PercolationEnsemble',
    'SparseGraph',
    'components',
    'edge_moments',
    'expected_edge_count',
    'expected_poisson_edges',
    'giant',
    'kernel_coupling_tv',
    'kernel_denominator',
    'kernel_discrepancy',
    'outside_vertices',
    'poisson_p_for_time',
    'sample_ensemble',
    'sample_outside_graph',
    'sample_poisson_graph',
]
