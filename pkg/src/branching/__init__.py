"""
Poi(V_n) branching processes and multitype branching process trees
"""

from .multitype import (
    TypedTree,
    generations_contained,
    kill,
    killing_factor,
    mtbp_rate,
    mtbp_sample,
    prune,
    restrict_types,
    superposition_counts,
    type_erasure_distance,
)
from .offspring import (
    AliasTable,
    HeightSample,
    HeightTail,
    SizeBiasedOffspring,
    TailEstimate,
    bp_height_sample,
    height_tail,
    matched_levels,
    offspring_pmf_distance,
    poi_vn_tail_estimate,
    summarize_heights,
)

__all__ = [
    'AliasTable',
    'HeightSample',
    'HeightTail',
    'SizeBiasedOffspring',
    'TailEstimate',
    'TypedTree',
    'bp_height_sample',
    'generations_contained',
    'height_tail',
    'kill',
    'killing_factor',
    'mtbp_rate',
    'mtbp_sample',
    'matched_levels',
    'offspring_pmf_distance',
    'poi_vn_tail_estimate',
    'prune',
    'restrict_types',
    'summarize_heights',
    'superposition_counts',
    'type_erasure_distance',
]
