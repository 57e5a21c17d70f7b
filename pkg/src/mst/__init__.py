"""
Minimal spanning trees, cycle breaking and greedy attachment
"""

from .attach import ATTACHED, EXHAUSTED, AttachResult, algorithm1_attach
from .cycle_breaking import (
    EXACT_EDGE_LIMIT,
    CBDResult,
    LawDistance,
    cbd_infty,
    cbd_law_distance,
    cbd_law_exact,
    mst_law_exact,
    spanning_trees,
)
from .kruskal import (
    DuplicateWeightError,
    NestedMST,
    UnionFind,
    kruskal,
    kruskal_by_rank,
    mst_of_giant,
    spanning_forest_edges,
    verify_minimax,
)
from .tree import TreeStructure, forest_edge_set, normalize_edge, total_weight, tree_from_parent_array

__all__ = [
    'ATTACHED',
    'AttachResult',
    'CBDResult',
    'DuplicateWeightError',
    'EXACT_EDGE_LIMIT',
    'EXHAUSTED',
    'LawDistance',
    'NestedMST',
    'TreeStructure',
    'UnionFind',
    'algorithm1_attach',
    'cbd_infty',
    'cbd_law_distance',
    'cbd_law_exact',
    'forest_edge_set',
    'kruskal',
    'kruskal_by_rank',
    'mst_law_exact',
    'mst_of_giant',
    'normalize_edge',
    'spanning_forest_edges',
    'spanning_trees',
    'total_weight',
    'tree_from_parent_array',
]
