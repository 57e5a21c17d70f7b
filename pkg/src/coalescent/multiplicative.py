"""
Finite-state multiplicative coalescent and its equivalence with the static graph
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
from loguru import logger
from tqdm import tqdm

from ..mst import UnionFind
from ..utils.stats import empirical_law, tv_distance

# Vertex sets up to this size have an enumerable graph-side law
MAX_EXACT_VERTICES = 6

OrderedWeights = Tuple[float, ...]


@dataclass
class CoalescentState:
    """
    Clusters of vertex labels (1-based) with their weights and the clock

    A cluster's weight is the sum of its members' weights.
    """
    vertex_weights: np.ndarray
    clusters: List[List[int]]
    weights: List[float]
    clock: float = 0.0
    merges: int = 0

    @classmethod
    def singletons(cls, vertex_weights: Sequence[float]) -> "CoalescentState":
        x = np.asarray(vertex_weights, dtype=np.float64)
        if x.ndim != 1 or np.any(x < 0):
            raise ValueError("vertex weights must be a 1-d array of nonnegative reals")
        return cls(
            vertex_weights=x,
            clusters=[[v] for v in range(1, x.size + 1)],
            weights=[float(value) for value in x],
        )

    def total_rate(self) -> float:
        """Sum over unordered cluster pairs of W_a W_b"""
        s1 = math.fsum(self.weights)
        s2 = math.fsum(w * w for w in self.weights)
        return 0.5 * (s1 * s1 - s2)

    def merge(self, a: int, b: int):
        """Merge cluster b into cluster a"""
        if a == b:
            raise ValueError("cannot merge a cluster with itself")
        members = sorted(self.clusters[a] + self.clusters[b])
        self.clusters[a] = members
        self.weights[a] = math.fsum(self.vertex_weights[v - 1] for v in members)
        del self.clusters[b]
        del self.weights[b]
        self.merges += 1

    def ordered_weights(self) -> OrderedWeights:
        return canonical_weights(self.vertex_weights, self.clusters)

    def total_weight(self) -> float:
        return math.fsum(self.weights)


def canonical_weights(vertex_weights: np.ndarray, clusters: Sequence[Sequence[int]]) -> OrderedWeights:
    """Decreasing cluster weights, each summed over sorted members and rounded to 12 digits"""
    sums = [round(math.fsum(vertex_weights[v - 1] for v in sorted(c)), 12) for c in clusters]
    return tuple(sorted(sums, reverse=True))


def _weighted_index(weights: List[float], total: float, rng: np.random.Generator) -> int:
    target = rng.random() * total
    acc = 0.0
    for k, w in enumerate(weights):
        acc += w
        if target < acc:
            return k
    return len(weights) - 1


def simulate_mc(vertex_weights: Sequence[float], t: float, rng: np.random.Generator) -> CoalescentState:
    """
    Run MC((V, x), t): clusters a and b merge at rate W_a W_b until the clock passes t

    The holding time has rate (S_1^2 - S_2) / 2; the merging pair is drawn by
    two weight-biased draws, rejected when both pick the same cluster.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    state = CoalescentState.singletons(vertex_weights)

    while len(state.weights) > 1:
        rate = state.total_rate()
        if rate <= 0.0:
            break
        wait = rng.exponential(1.0 / rate)
        if state.clock + wait > t:
            break
        state.clock += wait

        w = state.weights
        total = math.fsum(w)
        while True:
            a = _weighted_index(w, total, rng)
            b = _weighted_index(w, total, rng)
            if a != b:
                break
        a, b = min(a, b), max(a, b)
        state.merge(a, b)

    state.clock = t
    return state


def graph_partition_law(vertex_weights: Sequence[float], t: float) -> Dict[OrderedWeights, float]:
    """
    Exact law of the ordered component weights of G((V, x), t)

    Every pair {u, v} is an edge with probability 1 - exp(-t x_u x_v); all
    edge patterns are enumerated.
    """
    x = np.asarray(vertex_weights, dtype=np.float64)
    n = x.size
    if n > MAX_EXACT_VERTICES:
        raise ValueError(f"exact graph law limited to {MAX_EXACT_VERTICES} vertices, got {n}")
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    probs = [-math.expm1(-t * x[i - 1] * x[j - 1]) for i, j in pairs]

    law: Dict[OrderedWeights, float] = {}
    for pattern in itertools.product((False, True), repeat=len(pairs)):
        weight = 1.0
        uf = UnionFind(n + 1)
        for present, p, (i, j) in zip(pattern, probs, pairs):
            weight *= p if present else 1.0 - p
            if present:
                uf.union(i, j)
        if weight == 0.0:
            continue
        groups: Dict[int, List[int]] = {}
        for v in range(1, n + 1):
            groups.setdefault(uf.find(v), []).append(v)
        key = canonical_weights(x, list(groups.values()))
        law[key] = law.get(key, 0.0) + weight
    return law


@dataclass(frozen=True)
class EquivalenceResult:
    """TV distance between the simulated coalescent law and the exact graph law"""
    tv: float
    trials: int
    coalescent_law: Dict[OrderedWeights, float]
    graph_law: Dict[OrderedWeights, float]


def mc_graph_equivalence(vertex_weights: Sequence[float], t: float, trials: int, rng: np.random.Generator,
                         show_progress: bool = False) -> EquivalenceResult:
    """Compare ordered cluster weights of ``simulate_mc`` with the components of G((V, x), t)"""
    samples = [
        simulate_mc(vertex_weights, t, rng).ordered_weights()
        for _ in tqdm(range(trials), desc="Coalescent", unit="run", disable=not show_progress)
    ]
    coalescent_law = empirical_law(samples)
    graph_law = graph_partition_law(vertex_weights, t)
    tv = tv_distance(coalescent_law, graph_law)
    logger.debug(f"Coalescent vs graph TV at t={t} over {trials} runs: {tv:.4f}")
    return EquivalenceResult(tv=tv, trials=trials, coalescent_law=coalescent_law, graph_law=graph_law)
