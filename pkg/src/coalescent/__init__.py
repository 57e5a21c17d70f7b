"""
Multiplicative coalescent
"""

from .multiplicative import (
    MAX_EXACT_VERTICES,
    CoalescentState,
    EquivalenceResult,
    canonical_weights,
    graph_partition_law,
    mc_graph_equivalence,
    simulate_mc,
)

__all__ = [
    'CoalescentState',
    'EquivalenceResult',
    'MAX_EXACT_VERTICES',
    'canonical_weights',
    'graph_partition_law',
    'mc_graph_equivalence',
    'simulate_mc',
]
