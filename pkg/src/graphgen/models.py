"""
Poisson-kernel random graphs, the outside graph H_n(lambda, delta) and kernel diagnostics
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from loguru import logger

from ..utils.rng import STREAM_OUTSIDE, STREAM_POISSON
from ..utils.stats import empirical_law, tv_distance
from ..weights import WeightSequence, derived_stats, p_lambda
from .ensemble import KERNEL_FULL_L, KERNEL_MINUS_ELL, kernel_denominator, sample_ensemble
from .graph import SparseGraph
from .sampling import KERNEL_EXPONENTIAL, KERNEL_PRODUCT, edge_moments, pair_probabilities, skip_sample


def _poisson_scale(seq: WeightSequence, p: float, denominator: str) -> float:
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    derived, _, _ = derived_stats(seq)
    if denominator == "ell":
        return p / derived.ell_n
    if denominator == "L":
        return p / derived.L_n
    raise ValueError(f"denominator must be 'ell' or 'L', got {denominator!r}")


def sample_poisson_graph(seq: WeightSequence, p: float, seed: int, replica: int = 0,
                         denominator: str = "ell") -> SparseGraph:
    """
    Independent edges with probability 1 - exp(-p w_i w_j / ell_n)

    ``denominator="L"`` switches to L_n, which with p = 1 is the Norros-Reittu graph.
    The multiplicative-coalescent form G([n], x, t) is this graph at
    ``poisson_p_for_time(seq, t)``.
    """
    scale = _poisson_scale(seq, p, denominator)
    edges = skip_sample(seq.w, scale, KERNEL_EXPONENTIAL, seed, (replica, STREAM_POISSON))
    logger.debug(f"Sampled Poisson graph n={seq.n} p={p:.6g}: {edges.shape[0]} edges")
    return SparseGraph(seq.n, edges)


def poisson_p_for_time(seq: WeightSequence, t: float) -> float:
    """
    The p at which the Poisson graph equals G([n], x, t) in law

    Edge probabilities 1 - exp(-t x_i x_j) with x_i = w_i / (n^rho sigma2^(1/2))
    match 1 - exp(-p w_i w_j / ell_n) when p = t ell_n / (n^(2 rho) sigma2).
    """
    derived, _, consts = derived_stats(seq)
    return t * derived.ell_n / (seq.n ** (2.0 * consts.rho) * derived.sigma2)


def expected_poisson_edges(seq: WeightSequence, p: float, vertices: Optional[Iterable[int]] = None,
                           denominator: str = "ell"):
    """Mean and variance of the Poisson-graph edge count, optionally on a vertex subset"""
    scale = _poisson_scale(seq, p, denominator)
    w = seq.w if vertices is None else seq.weights_of(sorted(vertices))
    return edge_moments(w, scale, KERNEL_EXPONENTIAL)


def outside_vertices(n: int, giant_vertices: Iterable[int]) -> np.ndarray:
    """Sorted labels of [n] outside the given vertex set"""
    inside = np.zeros(n + 1, dtype=bool)
    inside[0] = True
    inside[np.asarray(list(giant_vertices), dtype=np.int64)] = True
    return np.flatnonzero(~inside)


def sample_outside_graph(seq: WeightSequence, lam: float, delta: float, giant_vertices: Iterable[int],
                         seed: int, replica: int = 0) -> SparseGraph:
    """
    H_n(lambda, delta): a Poisson graph at p_{(1+delta)lambda} on the vertices outside the giant

    Edge probability is 1 - exp(-p w_i w_j / ell_n) with the unclamped
    p = p^n_{(1+delta)lambda}; an empty complement gives an empty graph.
    """
    labels = outside_vertices(seq.n, giant_vertices)
    p = p_lambda(seq, (1.0 + delta) * lam)
    if labels.size < 2:
        return SparseGraph(seq.n, np.zeros((0, 2), dtype=np.int64), vertices=labels)

    scale = _poisson_scale(seq, p, "ell")
    edges = skip_sample(seq.w[labels - 1], scale, KERNEL_EXPONENTIAL, seed, (replica, STREAM_OUTSIDE),
                        labels=labels)
    logger.debug(f"Sampled H_n(lambda={lam}, delta={delta}) on {labels.size} vertices: {edges.shape[0]} edges")
    return SparseGraph(seq.n, edges, vertices=labels)


@dataclass(frozen=True)
class KernelCouplingReport:
    """Distance between the full-L and minus-ell product kernels at one n"""
    n: int
    trials: int
    tv_edge_count: float
    discrepancy: float
    mean_full: float
    mean_minus: float


def kernel_discrepancy(seq: WeightSequence, chunk: int = 1024) -> float:
    """
    Sum over i != j of (q_full - q_minus)^2 / q_minus

    A vanishing value means the two product-kernel graphs admit a coupling
    under which they coincide with probability tending to one.
    """
    ww = seq.w
    full = 1.0 / kernel_denominator(seq, KERNEL_FULL_L)
    minus = 1.0 / kernel_denominator(seq, KERNEL_MINUS_ELL)
    columns = np.arange(ww.size)[None, :]
    total = 0.0
    for start in range(0, ww.size, chunk):
        rows = ww[start:start + chunk]
        q_full = pair_probabilities(rows, ww, full, KERNEL_PRODUCT)
        q_minus = pair_probabilities(rows, ww, minus, KERNEL_PRODUCT)
        off_diagonal = columns != np.arange(start, start + rows.size)[:, None]
        total += float(np.sum(np.where(off_diagonal, (q_full - q_minus) ** 2 / q_minus, 0.0)))
    return total


def kernel_coupling_tv(seq: WeightSequence, trials: int, seed: int) -> KernelCouplingReport:
    """
    Empirical TV distance between the edge-count laws of the two product kernels

    Both sides use independent sub-streams; the analytic discrepancy is reported alongside.
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    counts = {KERNEL_FULL_L: [], KERNEL_MINUS_ELL: []}
    for tag_index, tag in enumerate((KERNEL_FULL_L, KERNEL_MINUS_ELL)):
        for trial in range(trials):
            ens = sample_ensemble(seq, tag, seed, replica=trial * 2 + tag_index, edge_cap=None)
            counts[tag].append(ens.m)

    full = counts[KERNEL_FULL_L]
    minus = counts[KERNEL_MINUS_ELL]
    report = KernelCouplingReport(
        n=seq.n,
        trials=trials,
        tv_edge_count=tv_distance(empirical_law(full), empirical_law(minus)),
        discrepancy=kernel_discrepancy(seq),
        mean_full=float(np.mean(full)),
        mean_minus=float(np.mean(minus)),
    )
    logger.debug(f"Kernel coupling n={seq.n}: TV={report.tv_edge_count:.4f}, discrepancy={report.discrepancy:.4g}")
    return report
