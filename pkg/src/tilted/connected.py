"""
Connected-component samplers built on tilted ordered trees, and the two-stage graph sampler
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from ..coalescent import simulate_mc
from ..graphgen import SparseGraph, components
from ..mst import UnionFind
from ..weights import as_weight_array
from .tilt import exact_tilted_law, f_function, permitted_pairs, sample_tilted_ordered
from .trees import MAX_ENUMERATION, ProbabilityVector, sample_ordered_ptree

# Exact construction law enumerates surplus subsets of every plane tree
MAX_CONSTRUCTION_VERTICES = 5

PARTITION_COALESCENT = "coalescent"
PARTITION_GRAPH = "graph"

GraphKey = Tuple[Tuple[int, int], ...]


def graph_key(g: SparseGraph) -> GraphKey:
    """Sorted edge tuple identifying a labeled graph"""
    return tuple((int(i), int(j)) for i, j in g.edges.tolist())


def _pair_probability(pv: ProbabilityVector, i: int, j: int) -> float:
    return -math.expm1(-pv.a * pv.of(i) * pv.of(j))


def sample_connected(pv: ProbabilityVector, rng: np.random.Generator, mode: Optional[str] = None) -> SparseGraph:
    """
    Draw a connected graph on 1..m with law P_con(q, a)

    A tilted ordered tree supplies the spanning backbone; every permitted
    pair (i, j) then becomes a surplus edge with probability 1 - exp(-a q_i q_j).
    """
    tree = sample_tilted_ordered(pv, rng, mode=mode)
    edges = tree.edges()
    for i, j in sorted(permitted_pairs(tree)):
        if rng.random() < _pair_probability(pv, i, j):
            edges.append((min(i, j), max(i, j)))
    return SparseGraph.from_edge_list(pv.m, edges)


def construction_law(pv: ProbabilityVector) -> Dict[GraphKey, float]:
    """Exact law of ``sample_connected`` by summing over plane trees and surplus subsets"""
    if pv.m > MAX_CONSTRUCTION_VERTICES:
        raise ValueError(f"construction law limited to m <= {MAX_CONSTRUCTION_VERTICES}, got {pv.m}")
    tilted = exact_tilted_law(pv)
    law: Dict[GraphKey, float] = {}
    for tree, prob in zip(tilted.trees, tilted.probabilities):
        base = tree.edges()
        pairs = sorted(permitted_pairs(tree))
        probs = [_pair_probability(pv, i, j) for i, j in pairs]
        for pattern in itertools.product((False, True), repeat=len(pairs)):
            weight = float(prob)
            extra = []
            for present, p, (i, j) in zip(pattern, probs, pairs):
                weight *= p if present else 1.0 - p
                if present:
                    extra.append((min(i, j), max(i, j)))
            key = tuple(sorted(base + extra))
            law[key] = law.get(key, 0.0) + weight
    return law


def exact_connected_law(pv: ProbabilityVector) -> Dict[GraphKey, float]:
    """
    P_con over connected graphs on 1..m

    Each pair is an edge independently with probability 1 - exp(-a q_i q_j),
    conditioned on connectivity; all edge patterns are enumerated.
    """
    m = pv.m
    if m > MAX_ENUMERATION:
        raise ValueError(f"exact connected law limited to m <= {MAX_ENUMERATION}, got {m}")
    pairs = list(itertools.combinations(range(1, m + 1), 2))
    probs = [_pair_probability(pv, i, j) for i, j in pairs]
    law: Dict[GraphKey, float] = {}
    for pattern in itertools.product((False, True), repeat=len(pairs)):
        uf = UnionFind(m + 1)
        weight = 1.0
        merged = 0
        for present, p, (i, j) in zip(pattern, probs, pairs):
            weight *= p if present else 1.0 - p
            if present and uf.union(i, j):
                merged += 1
        if merged == m - 1 and weight > 0.0:
            law[tuple(pair for present, pair in zip(pattern, pairs) if present)] = weight
    total = math.fsum(law.values())
    return {key: value / total for key, value in law.items()}


def rejection_connected(pv: ProbabilityVector, rng: np.random.Generator, max_attempts: int = 100_000) -> SparseGraph:
    """Sample the inhomogeneous graph on 1..m until it is connected"""
    m = pv.m
    rows, cols = np.triu_indices(m, k=1)
    probs = -np.expm1(-pv.a * pv.q[rows] * pv.q[cols])
    for _ in range(max_attempts):
        present = rng.random(probs.size) < probs
        g = SparseGraph.from_edge_list(m, np.column_stack([rows[present] + 1, cols[present] + 1]))
        if m == 1 or components(g, np.ones(m)).num_components == 1:
            return g
    raise RuntimeError(f"no connected sample in {max_attempts} attempts")


@dataclass(frozen=True)
class SurplusProxy:
    """Observed frequency of surplus >= 2 against the Poisson domination proxy"""
    frequency: float
    bound: float
    samples: int

    @property
    def dominated(self) -> bool:
        return self.frequency <= self.bound


def surplus_proxy(pv: ProbabilityVector, samples: int, rng: np.random.Generator,
                  mode: Optional[str] = None) -> SurplusProxy:
    """
    Compare P(surplus >= 2) of ``sample_connected`` with a^2 e^{a q_max} E[||f||^2 e^{a ||f||}]

    The expectation is over untilted P_ord trees.
    """
    hits = 0
    for _ in range(samples):
        g = sample_connected(pv, rng, mode=mode)
        hits += (g.m - pv.m + 1) >= 2
    sups = np.asarray([f_function(sample_ordered_ptree(pv, rng), pv).sup() for _ in range(samples)])
    a = pv.a
    bound = a * a * math.exp(a * pv.q_max) * float(np.mean(sups ** 2 * np.exp(a * sups)))
    result = SurplusProxy(frequency=hits / samples, bound=bound, samples=samples)
    logger.debug(f"Surplus proxy m={pv.m}, a={a}: frequency {result.frequency:.4g} vs bound {bound:.4g}")
    return result


@dataclass(frozen=True, eq=False)
class NormHistogram:
    """Histogram of ||f||_inf / ||q||_2 over P_ord trees"""
    ratios: np.ndarray
    counts: np.ndarray
    edges: np.ndarray

    def tail(self, x: float) -> float:
        return float(np.mean(self.ratios >= x))


def f_norm_histogram(pv: ProbabilityVector, samples: int, rng: np.random.Generator, bins: int = 20) -> NormHistogram:
    ratios = np.asarray([
        f_function(sample_ordered_ptree(pv, rng), pv).sup() / pv.norm2
        for _ in range(samples)
    ])
    counts, edges = np.histogram(ratios, bins=bins)
    return NormHistogram(ratios=ratios, counts=counts, edges=edges)


def sample_static_graph(weights, t: float, rng: np.random.Generator) -> SparseGraph:
    """G(([n], w), t): each pair is an edge independently with probability 1 - exp(-t w_i w_j)"""
    w = as_weight_array(weights)
    n = w.size
    rows, cols = np.triu_indices(n, k=1)
    present = rng.random(rows.size) < -np.expm1(-t * w[rows] * w[cols])
    return SparseGraph.from_edge_list(n, np.column_stack([rows[present] + 1, cols[present] + 1]))


def _partition(w: np.ndarray, t: float, rng: np.random.Generator, method: str) -> List[List[int]]:
    if method == PARTITION_COALESCENT:
        return [list(c) for c in simulate_mc(w, t, rng).clusters]
    if method == PARTITION_GRAPH:
        g = sample_static_graph(w, t, rng)
        partition = components(g, w)
        return [partition.members(c).tolist() for c in range(partition.num_components)]
    raise ValueError(f"unknown partition method {method!r}")


def two_stage_sample(weights, t: float, rng: np.random.Generator,
                     partition: str = PARTITION_COALESCENT, mode: Optional[str] = None) -> SparseGraph:
    """
    Sample G(([n], w), t) in two stages

    Stage I draws the component partition, by default through the
    multiplicative coalescent run to time t. Stage II fills every component
    V independently with ``sample_connected`` at q_v = w_v / W(V) and
    a = t W(V)^2.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    w = as_weight_array(weights)
    if np.any(w <= 0):
        raise ValueError("two-stage sampling needs positive weights")

    edges: List[Tuple[int, int]] = []
    for members in _partition(w, t, rng, partition):
        if len(members) < 2:
            continue
        members = sorted(members)
        masses = w[np.asarray(members) - 1]
        total = math.fsum(masses)
        pv = ProbabilityVector.from_masses(masses, t * total * total)
        local = sample_connected(pv, rng, mode=mode)
        edges.extend((members[i - 1], members[j - 1]) for i, j in local.edges.tolist())
    return SparseGraph.from_edge_list(w.size, edges)
