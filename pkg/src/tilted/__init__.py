"""
p-trees, tilted ordered trees and exact samplers for connected components
"""

from .connected import (
    MAX_CONSTRUCTION_VERTICES,
    PARTITION_COALESCENT,
    PARTITION_GRAPH,
    NormHistogram,
    SurplusProxy,
    construction_law,
    exact_connected_law,
    f_norm_histogram,
    graph_key,
    rejection_connected,
    sample_connected,
    sample_static_graph,
    surplus_proxy,
    two_stage_sample,
)
from .tilt import (
    MODE_EXACT,
    MODE_MCMC,
    SAMPLER_MODES,
    ChainResult,
    ExactTiltedLaw,
    FFunction,
    exact_tilted_law,
    f_function,
    log_tilt_weight,
    permitted_pairs,
    sample_tilted_ordered,
    tilt_weight,
    tilted_chain,
)
from .trees import (
    MAX_ENUMERATION,
    OrderedTree,
    ProbabilityVector,
    degree_marginals,
    enumerate_ordered_trees,
    enumerate_rooted_trees,
    exact_ptree_law,
    ordered_probability,
    ptree_probability,
    rooted_key,
    sample_ordered_ptree,
    sample_ptree,
)

__all__ = [
    'ChainResult',
    'ExactTiltedLaw',
    'FFunction',
    'MAX_CONSTRUCTION_VERTICES',
    'MAX_ENUMERATION',
    'MODE_EXACT',
    'MODE_MCMC',
    'NormHistogram',
    'OrderedTree',
    'PARTITION_COALESCENT',
    'PARTITION_GRAPH',
    'ProbabilityVector',
    'SAMPLER_MODES',
    'SurplusProxy',
    'construction_law',
    'degree_marginals',
    'enumerate_ordered_trees',
    'enumerate_rooted_trees',
    'exact_connected_law',
    'exact_ptree_law',
    'exact_tilted_law',
    'f_function',
    'f_norm_histogram',
    'graph_key',
    'log_tilt_weight',
    'ordered_probability',
    'permitted_pairs',
    'ptree_probability',
    'rejection_connected',
    'rooted_key',
    'sample_connected',
    'sample_ordered_ptree',
    'sample_ptree',
    'sample_static_graph',
    'surplus_proxy',
    'tilt_weight',
    'tilted_chain',
    'two_stage_sample',
]
