"""
Greedy attachment of a vertex to the critical-window giant through the cheapest outgoing edges
"""

import heapq
from dataclasses import dataclass
from typing import List

import numpy as np
from loguru import logger

from ..graphgen import PercolationEnsemble, components
from ..weights import WeightSequence, derived_stats
from .tree import Edge, normalize_edge

ATTACHED = "attached"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class AttachResult:
    """Edges added while growing the cluster of ``vertex`` and why the growth stopped"""
    vertex: int
    edges: List[Edge]
    outcome: str
    cluster_size: int

    @property
    def attached(self) -> bool:
        return self.outcome == ATTACHED


def algorithm1_attach(ens: PercolationEnsemble, seq: WeightSequence, lam: float, v: int) -> AttachResult:
    """
    Grow the cluster of v until it reaches C(1) at p^n_lambda or runs out of outgoing edges

    The cluster starts as the component of v in the ensemble percolated at
    p^n_lambda. Each step adds the lightest edge with u > p^n_lambda leaving
    the cluster, over all edges seen so far, and absorbs the whole percolated
    component at its far end.
    """
    p = derived_stats(seq, lam)[1].p_lambda
    percolated = ens.percolate(p)
    partition = components(percolated, seq)
    labels = partition.labels
    giant_id = partition.component_of(1)
    if labels[v] == giant_id:
        return AttachResult(vertex=v, edges=[], outcome=ATTACHED, cluster_size=int(partition.counts[giant_id]))

    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(partition.num_components + 1))

    def members(component: int) -> List[int]:
        return order[bounds[component]:bounds[component + 1]].tolist()

    adjacency = ens.graph.adjacency
    weight = ens.weight_lookup
    absorbed = {int(labels[v])}
    frontier: list = []

    def absorb(component: int):
        for x in members(component):
            for y in adjacency[x]:
                if labels[y] in absorbed:
                    continue
                e = normalize_edge(x, y)
                u = weight[e]
                # Edges with u <= p stay inside percolated components
                if u > p:
                    heapq.heappush(frontier, (u, e, y))

    absorb(int(labels[v]))
    added: List[Edge] = []
    size = int(partition.counts[labels[v]])
    while frontier:
        u, e, far = heapq.heappop(frontier)
        component = int(labels[far])
        if component in absorbed:
            continue
        added.append(e)
        absorbed.add(component)
        size += int(partition.counts[component])
        if component == giant_id:
            logger.debug(f"Vertex {v} attached to C(1) after {len(added)} edge(s)")
            return AttachResult(vertex=v, edges=added, outcome=ATTACHED, cluster_size=size)
        absorb(component)

    logger.debug(f"Vertex {v} exhausted its outgoing edges after {len(added)} edge(s)")
    return AttachResult(vertex=v, edges=added, outcome=EXHAUSTED, cluster_size=size)
