"""
Graph statistics with provenance, graph diameters, degree tails and the uniform-minima bound
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from ..graphgen import SparseGraph, components
from ..utils.stats import FitResult, loglog_fit, mc_standard_error

# Components up to this size get an exact all-sources diameter
EXACT_DIAMETER_LIMIT = 2000


@dataclass
class MetricReport:
    """Named statistics labelled with the (seed, n, tau, lambda) that produced them"""
    seed: int
    n: int
    tau: float
    lam: Optional[float] = None
    replica: int = 0
    scalars: Dict[str, float] = field(default_factory=dict)
    vectors: Dict[str, np.ndarray] = field(default_factory=dict)

    def provenance(self) -> Dict[str, float]:
        return {"seed": self.seed, "replica": self.replica, "n": self.n, "tau": self.tau,
                "lambda": float("nan") if self.lam is None else self.lam}

    def row(self) -> Dict[str, float]:
        """Provenance followed by the scalar statistics, for CSV emission"""
        return {**self.provenance(), **self.scalars}


def _bfs(adjacency: List[List[int]], source: int) -> Dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in adjacency[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


@dataclass(frozen=True)
class GraphDiameter:
    """Largest component diameter; ``exact`` is False when a double-sweep lower bound was used"""
    value: int
    exact: bool


def graph_diameter(g: SparseGraph, exact_limit: int = EXACT_DIAMETER_LIMIT) -> GraphDiameter:
    """
    Maximum hop diameter over the components of ``g``

    Components above ``exact_limit`` vertices get the double-sweep lower bound
    and the result is flagged as inexact.
    """
    adjacency = g.adjacency
    seen = set()
    best = 0
    exact = True
    for v in g.vertex_set().tolist():
        if v in seen:
            continue
        dist = _bfs(adjacency, v)
        members = list(dist)
        seen.update(members)
        if len(members) <= exact_limit:
            ecc = max(max(_bfs(adjacency, x).values()) for x in members)
        else:
            far = max(dist, key=dist.get)
            ecc = max(_bfs(adjacency, far).values())
            exact = False
        best = max(best, ecc)
    if not exact:
        logger.debug(f"Diameter {best} is a lower bound: a component exceeds {exact_limit} vertices")
    return GraphDiameter(value=best, exact=exact)


def graph_stats(g: SparseGraph, seq, seed: int = 0, lam: Optional[float] = None,
                replica: int = 0) -> MetricReport:
    """
    Surplus, component masses and degree statistics of ``g``

    Leaf fraction and maximum degree are the finite-n traces of the leaf and
    hub structure of spanning trees.
    """
    partition = components(g, seq)
    surplus = partition.surplus()
    degrees = g.degrees()[g.vertex_set()]
    histogram = np.bincount(degrees) if degrees.size else np.zeros(1, dtype=np.int64)
    order = np.argsort(-partition.masses, kind="stable")

    report = MetricReport(seed=seed, n=g.n, tau=float(getattr(seq, "tau", float("nan"))), lam=lam, replica=replica)
    report.scalars.update({
        "vertices": float(g.num_vertices),
        "edges": float(g.m),
        "components": float(partition.num_components),
        "total_surplus": float(surplus.sum()),
        "max_surplus": float(surplus.max()) if surplus.size else 0.0,
        "max_mass": float(partition.masses.max()) if partition.masses.size else 0.0,
        "leaf_fraction": float(np.mean(degrees == 1)) if degrees.size else 0.0,
        "max_degree": float(degrees.max()) if degrees.size else 0.0,
        "mean_degree": float(degrees.mean()) if degrees.size else 0.0,
    })
    report.vectors.update({
        "surplus": surplus[order],
        "masses": partition.masses[order],
        "counts": partition.counts[order],
        "degree_histogram": histogram,
    })
    return report


def degree_tail_exponent(g: SparseGraph, k_min: Optional[int] = None, points: int = 12) -> Tuple[float, FitResult]:
    """
    Estimate tau from the empirical degree tail P(D >= k) ~ k^{-(tau - 1)}

    Tail frequencies are read at log-spaced degrees between ``k_min`` (twice
    the mean degree by default) and half the maximum degree.
    """
    degrees = g.degrees()[g.vertex_set()]
    if degrees.size == 0 or degrees.max() < 2:
        raise ValueError("degree tail needs vertices of degree at least 2")
    k_min = k_min or max(1, int(np.ceil(2.0 * degrees.mean())))
    k_max = max(k_min + 1, int(degrees.max() // 2))
    grid = np.unique(np.round(np.geomspace(k_min, k_max, points)).astype(np.int64))
    sorted_deg = np.sort(degrees)
    tail = (degrees.size - np.searchsorted(sorted_deg, grid, side="left")) / degrees.size
    fit = loglog_fit(grid, tail)
    return 1.0 - fit.slope, fit


@dataclass(frozen=True)
class UniformMinimaResult:
    """Empirical probability that the first group holds the overall minimum, with its lower bound"""
    probability: float
    bound: float
    stderr: float
    trials: int

    @property
    def passed(self) -> bool:
        return self.probability >= self.bound - 3.0 * self.stderr


def uniform_minima_check(m0: int, x0: float, xs, trials: int, rng: np.random.Generator) -> UniformMinimaResult:
    """
    P(min of m0 Unif[x0, 1] < min of Unif[x_j, 1], j = 1..k) against m0 / (m0 + k)

    Requires x0 <= min x_j, the regime in which the bound holds.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if m0 < 1 or xs.size < 1:
        raise ValueError("need m0 >= 1 and at least one competing uniform")
    if not 0.0 <= x0 <= xs.min() or xs.max() > 1.0:
        raise ValueError("need 0 <= x0 <= min(xs) and all offsets at most 1")

    first = x0 + (1.0 - x0) * rng.random((trials, m0))
    others = xs + (1.0 - xs) * rng.random((trials, xs.size))
    probability = float(np.mean(first.min(axis=1) < others.min(axis=1)))
    return UniformMinimaResult(
        probability=probability,
        bound=m0 / (m0 + xs.size),
        stderr=mc_standard_error(probability, trials),
        trials=trials,
    )
