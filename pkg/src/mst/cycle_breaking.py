"""
Discrete cycle breaking and exact spanning-tree laws of small graphs
"""

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Set

import numpy as np
from loguru import logger
from tqdm import tqdm

from ..graphgen import SparseGraph
from ..utils.stats import empirical_law, tv_distance
from .kruskal import UnionFind
from .tree import Edge, TreeStructure, forest_edge_set

EdgeSet = FrozenSet[Edge]

# Edge count up to which exact laws are enumerated
EXACT_EDGE_LIMIT = 10
# Edge count up to which the MST law enumerates all weight orderings
PERMUTATION_EDGE_LIMIT = 8


@dataclass(frozen=True)
class CBDResult:
    """Forest left by cycle breaking and the number of deleted edges"""
    forest: List[TreeStructure]
    deletions: int

    def edge_set(self) -> EdgeSet:
        return forest_edge_set(self.forest)


@dataclass(frozen=True)
class LawDistance:
    """TV distance between the MST law and the cycle-breaking law of a graph"""
    tv: float
    mode: str
    trials: int
    support: int


def _connected(adj: Dict[int, Set[int]], source: int, target: int) -> bool:
    seen = {source}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        if v == target:
            return True
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return False


def _adjacency(vertices: Iterable[int], edges: Iterable[Edge]) -> Dict[int, Set[int]]:
    adj: Dict[int, Set[int]] = {v: set() for v in vertices}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    return adj


def _is_bridge(adj: Dict[int, Set[int]], edge: Edge) -> bool:
    i, j = edge
    adj[i].discard(j)
    adj[j].discard(i)
    bridge = not _connected(adj, i, j)
    adj[i].add(j)
    adj[j].add(i)
    return bridge


def _forest(vertices: Iterable[int], edges: Iterable[Edge]) -> List[TreeStructure]:
    vertices = sorted(vertices)
    edges = list(edges)
    uf = UnionFind(max(vertices) + 1)
    for i, j in edges:
        uf.union(i, j)
    groups: Dict[int, List[int]] = {}
    for v in vertices:
        groups.setdefault(uf.find(v), []).append(v)
    grouped_edges: Dict[int, List[Edge]] = {}
    for i, j in edges:
        grouped_edges.setdefault(uf.find(i), []).append((i, j))
    return [TreeStructure.from_edges(members, grouped_edges.get(rep, []), root=members[0])
            for rep, members in sorted(groups.items(), key=lambda item: item[1][0])]


def cbd_infty(g: SparseGraph, rng: np.random.Generator) -> CBDResult:
    """
    Delete uniformly chosen non-bridge edges until only a forest remains

    Each step draws a uniform edge among those not yet known to be bridges;
    a bridge stays a bridge once found, so the draw is uniform over the
    deletable edges. Disconnected graphs are broken component by component.
    """
    vertices = g.vertex_set().tolist()
    edges = [tuple(e) for e in g.edges.tolist()]
    adj = _adjacency(vertices, edges)
    candidates = list(edges)
    kept: List[Edge] = []
    deletions = 0

    while candidates:
        k = int(rng.integers(len(candidates)))
        edge = candidates[k]
        candidates[k] = candidates[-1]
        candidates.pop()
        if _is_bridge(adj, edge):
            kept.append(edge)
            continue
        i, j = edge
        adj[i].discard(j)
        adj[j].discard(i)
        deletions += 1

    return CBDResult(forest=_forest(vertices, kept), deletions=deletions)


def spanning_trees(g: SparseGraph) -> List[EdgeSet]:
    """All spanning trees of a connected graph, as edge sets"""
    vertices = g.vertex_set().tolist()
    edges = [tuple(e) for e in g.edges.tolist()]
    if len(edges) > 2 * EXACT_EDGE_LIMIT:
        raise ValueError(f"refusing to enumerate spanning trees of a graph with {len(edges)} edges")
    trees = []
    for subset in itertools.combinations(edges, len(vertices) - 1):
        uf = UnionFind(g.n + 1)
        if all(uf.union(i, j) for i, j in subset):
            trees.append(frozenset(subset))
    return trees


def _kruskal_order(vertices: List[int], ordered_edges: Iterable[Edge]) -> EdgeSet:
    uf = UnionFind(max(vertices) + 1)
    return frozenset(e for e in ordered_edges if uf.union(*e))


def mst_law_exact(g: SparseGraph) -> Dict[EdgeSet, float]:
    """
    Law of the minimum spanning forest under i.i.d. continuous edge weights

    Small graphs enumerate every weight ordering; larger ones recurse on the
    uniformly random next-smallest edge, memoized on (accepted, pending) edges.
    """
    vertices = g.vertex_set().tolist()
    edges = [tuple(e) for e in g.edges.tolist()]
    m = len(edges)
    if m > EXACT_EDGE_LIMIT:
        raise ValueError(f"exact MST law limited to {EXACT_EDGE_LIMIT} edges, got {m}")
    if m == 0:
        return {frozenset(): 1.0}

    if m <= PERMUTATION_EDGE_LIMIT:
        law: Dict[EdgeSet, float] = {}
        weight = 1.0 / math.factorial(m)
        for order in itertools.permutations(edges):
            tree = _kruskal_order(vertices, order)
            law[tree] = law.get(tree, 0.0) + weight
        return law

    def joins(accepted: EdgeSet, edge: Edge) -> bool:
        uf = UnionFind(max(vertices) + 1)
        for i, j in accepted:
            uf.union(i, j)
        return uf.find(edge[0]) != uf.find(edge[1])

    @lru_cache(maxsize=None)
    def recurse(accepted: EdgeSet, pending: EdgeSet) -> Dict[EdgeSet, float]:
        useful = [e for e in pending if joins(accepted, e)]
        if not useful:
            return {accepted: 1.0}
        # Edges that already close a cycle are discarded whenever they come up
        out: Dict[EdgeSet, float] = {}
        share = 1.0 / len(useful)
        for e in useful:
            rest = frozenset(useful).difference([e])
            for tree, prob in recurse(accepted | {e}, rest).items():
                out[tree] = out.get(tree, 0.0) + share * prob
        return out

    return dict(recurse(frozenset(), frozenset(edges)))


def cbd_law_exact(g: SparseGraph) -> Dict[EdgeSet, float]:
    """Law of the forest left by ``cbd_infty``, by recursion over deletion sequences"""
    vertices = g.vertex_set().tolist()
    edges = frozenset(tuple(e) for e in g.edges.tolist())
    if len(edges) > EXACT_EDGE_LIMIT:
        raise ValueError(f"exact cycle-breaking law limited to {EXACT_EDGE_LIMIT} edges, got {len(edges)}")

    @lru_cache(maxsize=None)
    def recurse(current: EdgeSet) -> Dict[EdgeSet, float]:
        adj = _adjacency(vertices, current)
        deletable = [e for e in sorted(current) if not _is_bridge(adj, e)]
        if not deletable:
            return {current: 1.0}
        out: Dict[EdgeSet, float] = {}
        share = 1.0 / len(deletable)
        for e in deletable:
            for forest, prob in recurse(current - {e}).items():
                out[forest] = out.get(forest, 0.0) + share * prob
        return out

    return dict(recurse(edges))


def cbd_law_distance(g: SparseGraph, trials: int, rng: np.random.Generator,
                     mode: str = "exact", show_progress: bool = False) -> LawDistance:
    """
    TV distance between the MST law and the cycle-breaking law of ``g``

    ``exact`` compares both exact laws; ``monte-carlo`` compares ``trials``
    cycle-breaking samples with the exact MST law. Either way the graph may
    have at most ``EXACT_EDGE_LIMIT`` edges.
    """
    if mode not in ("exact", "monte-carlo"):
        raise ValueError(f"unknown mode {mode!r}")
    mst_law = mst_law_exact(g)

    if mode == "exact":
        cbd_law = cbd_law_exact(g)
        tv = tv_distance(mst_law, cbd_law)
        logger.debug(f"Exact MST vs cycle-breaking TV on {g.m} edges: {tv:.3g}")
        return LawDistance(tv=tv, mode="exact", trials=0, support=len(set(mst_law) | set(cbd_law)))

    samples = []
    for _ in tqdm(range(trials), desc="Cycle breaking", unit="sample", disable=not show_progress):
        samples.append(cbd_infty(g, rng).edge_set())
    sampled = empirical_law(samples)
    tv = tv_distance(mst_law, sampled)
    logger.debug(f"Monte-Carlo cycle-breaking TV over {trials} samples: {tv:.4f}")
    return LawDistance(tv=tv, mode="monte-carlo", trials=trials, support=len(set(mst_law) | set(sampled)))

