"""
Minimum spanning forests, the coupled family of giant-component MSTs and the minimax check
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.stats import rankdata

from ..graphgen import PercolationEnsemble, SparseGraph, components
from ..weights import WeightSequence, derived_stats
from .tree import Edge, TreeStructure, normalize_edge


class DuplicateWeightError(ValueError):
    """Raised when two edges share a weight, which makes the MST ambiguous"""


class UnionFind:
    """Disjoint sets over labels 0..size-1 with path halving and union by size"""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; False if they were already merged"""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def _edge_weights(g: SparseGraph, weights: Optional[Sequence[float]]) -> np.ndarray:
    if weights is None:
        if g.weights is None:
            raise ValueError("no edge weights given and the graph carries none")
        return g.weights
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (g.m,):
        raise ValueError(f"need {g.m} edge weights, got {w.shape}")
    return w


def _sorted_order(edges: np.ndarray, w: np.ndarray) -> np.ndarray:
    order = np.argsort(w, kind="stable")
    ties = np.flatnonzero(np.diff(w[order]) == 0)
    if ties.size:
        a, b = order[ties[0]], order[ties[0] + 1]
        raise DuplicateWeightError(
            f"edges {tuple(edges[a])} and {tuple(edges[b])} share weight {w[a]!r}; "
            f"{ties.size} tie(s) in total"
        )
    return order


def spanning_forest_edges(n: int, edges: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Indices of the minimum spanning forest edges, in increasing weight order"""
    order = _sorted_order(edges, w)
    pairs = edges.tolist()
    uf = UnionFind(n + 1)
    chosen = []
    for k in order.tolist():
        i, j = pairs[k]
        if uf.union(i, j):
            chosen.append(k)
    return np.asarray(chosen, dtype=np.int64)


def _forest_from_edges(g: SparseGraph, edge_idx: np.ndarray, w: np.ndarray) -> List[TreeStructure]:
    chosen = g.edges[edge_idx]
    weights = {(int(i), int(j)): float(u) for (i, j), u in zip(chosen, w[edge_idx])}
    by_vertex: Dict[int, List[Edge]] = {}
    uf = UnionFind(g.n + 1)
    for i, j in weights:
        uf.union(i, j)
    groups: Dict[int, List[int]] = {}
    for v in g.vertex_set().tolist():
        groups.setdefault(uf.find(v), []).append(v)
    for i, j in weights:
        by_vertex.setdefault(uf.find(i), []).append((i, j))

    forest = []
    for rep, members in sorted(groups.items(), key=lambda item: item[1][0]):
        forest.append(TreeStructure.from_edges(members, by_vertex.get(rep, []), root=members[0], weights=weights))
    return forest


def kruskal(g: SparseGraph, weights: Optional[Sequence[float]] = None) -> List[TreeStructure]:
    """
    Minimum spanning forest, one tree per component, ordered by smallest label

    Args:
        g: Graph
        weights: Per-edge weights aligned with ``g.edges``; defaults to ``g.weights``

    Raises:
        DuplicateWeightError: if two edges carry the same weight
    """
    w = _edge_weights(g, weights)
    chosen = spanning_forest_edges(g.n, g.edges, w)
    return _forest_from_edges(g, chosen, w)


def kruskal_by_rank(g: SparseGraph, weights: Optional[Sequence[float]] = None) -> List[TreeStructure]:
    """Kruskal run on the ranks of the weights; the forest edge sets match ``kruskal``"""
    w = _edge_weights(g, weights)
    ranks = rankdata(w, method="ordinal").astype(np.float64)
    _sorted_order(g.edges, w)
    chosen = spanning_forest_edges(g.n, g.edges, ranks)
    return _forest_from_edges(g, chosen, w)


@dataclass(frozen=True, eq=False)
class NestedMST:
    """
    MST of the component of vertex 1 with the vertex sets of its critical-window restrictions

    ``vertex_sets[k]`` is the component of vertex 1 in the ensemble percolated
    at ``p_values[k]``; the MST restricted to it is the MST of that component.
    """
    tree: TreeStructure
    lambdas: Tuple[float, ...]
    p_values: Tuple[float, ...]
    vertex_sets: Tuple[np.ndarray, ...]

    def restriction(self, index: int) -> TreeStructure:
        return self.tree.restrict(self.vertex_sets[index].tolist())


def mst_of_giant(ens: PercolationEnsemble, seq: WeightSequence, lambdas: Sequence[float]) -> NestedMST:
    """
    MST of C(1) in the ensemble plus, per lambda, the vertex set of C(1) at p^n_lambda

    The global Kruskal order is computed once; the per-lambda vertex sets come
    from replaying the tree edges below each threshold.
    """
    lambdas = tuple(float(lam) for lam in lambdas)
    if any(b < a for a, b in zip(lambdas, lambdas[1:])):
        raise ValueError("lambdas must be sorted increasingly")

    g = ens.graph
    partition = components(g, seq)
    giant_id = partition.component_of(1)
    members = partition.members(giant_id)

    if members.size == 1:
        tree = TreeStructure.singleton(1)
    else:
        chosen = spanning_forest_edges(g.n, g.edges, ens.u)
        in_giant = partition.labels[g.edges[chosen, 0]] == giant_id
        chosen = chosen[in_giant]
        weights = {(int(i), int(j)): float(u) for (i, j), u in zip(g.edges[chosen], ens.u[chosen])}
        tree = TreeStructure.from_edges(members.tolist(), weights.keys(), root=1, weights=weights)

    p_values = tuple(derived_stats(seq, lam)[1].p_lambda for lam in lambdas)

    tree_edges = sorted(((tree.edge_weight[v], normalize_edge(v, p)) for v, p in tree.parent.items()))
    uf = UnionFind(g.n + 1)
    vertex_sets = []
    cursor = 0
    for p in p_values:
        while cursor < len(tree_edges) and tree_edges[cursor][0] <= p:
            i, j = tree_edges[cursor][1]
            uf.union(i, j)
            cursor += 1
        root = uf.find(1)
        vertex_sets.append(np.asarray([v for v in tree.vertices if uf.find(v) == root], dtype=np.int64))

    logger.debug(f"MST of C(1): {tree.size} vertices; nested sizes {[s.size for s in vertex_sets]}")
    return NestedMST(tree=tree, lambdas=lambdas, p_values=p_values, vertex_sets=tuple(vertex_sets))


def verify_minimax(g: SparseGraph, weights: Optional[Sequence[float]], t: TreeStructure) -> bool:
    """
    Check that ``t`` is the bottleneck (minimax) spanning tree of its component in ``g``

    Every non-tree edge {u, v} of g inside the tree's vertex set must weigh at
    least as much as each edge of the tree path from u to v. Tree edges must be
    edges of g with matching weights.
    """
    w = _edge_weights(g, weights)
    weight_of = {(int(i), int(j)): float(u) for (i, j), u in zip(g.edges, w)}
    vertex_set = set(t.vertices)
    tree_edges = set(t.edges())

    for v, p in t.parent.items():
        e = normalize_edge(v, p)
        if e not in weight_of:
            logger.debug(f"Tree edge {e} is not an edge of the graph")
            return False
        if t.edge_weight and t.edge_weight[v] != weight_of[e]:
            logger.debug(f"Tree edge {e} carries weight {t.edge_weight[v]}, graph has {weight_of[e]}")
            return False

    parent_weight = {v: weight_of[normalize_edge(v, p)] for v, p in t.parent.items()}
    depth = t.depth
    for (i, j), b in weight_of.items():
        if (i, j) in tree_edges or i not in vertex_set or j not in vertex_set:
            continue
        heaviest = 0.0
        a, c = i, j
        while a != c:
            if depth[a] < depth[c]:
                a, c = c, a
            heaviest = max(heaviest, parent_weight[a])
            a = t.parent[a]
        if b < heaviest:
            logger.debug(f"Non-tree edge {(i, j)} of weight {b} undercuts a tree-path edge of weight {heaviest}")
            return False
    return True
