"""
The mixed-Poisson offspring law Poi(V_n), its Galton-Watson heights and tails
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.special import gammaln
from scipy.stats import poisson
from tqdm import tqdm

from ..utils.stats import FitResult, loglog_fit
from ..weights import WeightSequence, derived_stats


class AliasTable:
    """Vose alias table for O(1) draws from a finite discrete law"""

    def __init__(self, probabilities: Sequence[float]):
        p = np.asarray(probabilities, dtype=np.float64)
        if p.ndim != 1 or p.size == 0 or np.any(p < 0) or p.sum() <= 0:
            raise ValueError("alias table needs a nonempty vector of nonnegative weights")
        k = p.size
        scaled = (p / p.sum() * k).tolist()
        prob = [0.0] * k
        alias = list(range(k))
        small = [i for i, s in enumerate(scaled) if s < 1.0]
        large = [i for i, s in enumerate(scaled) if s >= 1.0]
        while small and large:
            s, g = small.pop(), large.pop()
            prob[s] = scaled[s]
            alias[s] = g
            scaled[g] = scaled[g] + scaled[s] - 1.0
            (small if scaled[g] < 1.0 else large).append(g)
        for i in large + small:
            prob[i] = 1.0
        self.prob = np.asarray(prob)
        self.alias = np.asarray(alias, dtype=np.int64)

    @property
    def size(self) -> int:
        return int(self.prob.size)

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Indices into the table's support"""
        column = rng.integers(self.size, size=size)
        keep = rng.random(size) < self.prob[column]
        return np.where(keep, column, self.alias[column])

    def law(self) -> np.ndarray:
        """Probabilities implied by the table, for exactness checks"""
        k = self.size
        out = self.prob / k
        np.add.at(out, self.alias, (1.0 - self.prob) / k)
        return out


@dataclass(frozen=True, eq=False)
class SizeBiasedOffspring:
    """
    V_n takes value v_i = w_i / nu_n with probability w_i / ell_n, i = 2..n

    A vertex has Poi(V_n) children; the mean offspring is one.
    """
    values: np.ndarray
    probabilities: np.ndarray
    table: AliasTable

    @classmethod
    def from_weights(cls, seq: WeightSequence) -> "SizeBiasedOffspring":
        derived, _, _ = derived_stats(seq)
        w = seq.w[1:]
        probabilities = w / derived.ell_n
        return cls(values=w / derived.nu_n, probabilities=probabilities, table=AliasTable(probabilities))

    def mean(self) -> float:
        """E[V_n], equal to one up to rounding"""
        return float(np.sum(self.values * self.probabilities))

    def sample_v(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return self.values[self.table.sample(size, rng)]

    def sample_offspring(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return rng.poisson(self.sample_v(size, rng))

    def pmf(self, k_max: int) -> np.ndarray:
        """Exact P(Poi(V_n) = k) for k = 0..k_max"""
        k = np.arange(k_max + 1)
        return np.sum(self.probabilities[:, None] * poisson.pmf(k[None, :], self.values[:, None]), axis=0)


@dataclass(frozen=True)
class HeightSample:
    """Height of one Galton-Watson tree; ``capped`` or ``censored`` when the run stopped early"""
    height: int
    capped: bool
    censored: bool
    population: int


def bp_height_sample(off: SizeBiasedOffspring, cap: int, rng: np.random.Generator,
                     population_budget: Optional[int] = None) -> HeightSample:
    """
    Height of a Poi(V_n) Galton-Watson tree explored generation by generation

    Stops at ``cap`` generations (flagged ``capped``) or once the cumulative
    population exceeds ``population_budget`` (flagged ``censored``).
    """
    if cap <= 0:
        raise ValueError(f"cap must be positive, got {cap}")
    generation = 1
    population = 1
    depth = 0
    while True:
        # Summed mixed Poisson offspring of one generation
        children = int(rng.poisson(float(np.sum(off.sample_v(generation, rng)))))
        if children == 0:
            return HeightSample(height=depth, capped=False, censored=False, population=population)
        depth += 1
        population += children
        generation = children
        if depth >= cap:
            return HeightSample(height=depth, capped=True, censored=False, population=population)
        if population_budget is not None and population > population_budget:
            return HeightSample(height=depth, capped=False, censored=True, population=population)


@dataclass(frozen=True)
class HeightTail:
    """Frequencies of height >= level over the sampled trees"""
    levels: Tuple[int, ...]
    frequencies: Tuple[float, ...]
    trials: int
    censored: int


def height_tail(off: SizeBiasedOffspring, levels: Sequence[int], trials: int, rng: np.random.Generator,
                population_budget: Optional[int] = None, show_progress: bool = False) -> HeightTail:
    """
    Estimate P(height >= level) for each level

    Censored trees count as reaching every level they have not been shown to
    miss, which only inflates the estimates.
    """
    levels = tuple(int(level) for level in levels)
    cap = max(levels)
    hits = np.zeros(len(levels), dtype=np.int64)
    censored = 0
    for _ in tqdm(range(trials), desc="Heights", unit="tree", disable=not show_progress):
        sample = bp_height_sample(off, cap, rng, population_budget)
        censored += sample.censored
        reached = cap if sample.censored else sample.height
        hits += np.asarray([reached >= level for level in levels])
    if censored:
        logger.warning(f"{censored} of {trials} trees censored by the population budget")
    return HeightTail(levels=levels, frequencies=tuple((hits / trials).tolist()), trials=trials, censored=censored)


@dataclass(frozen=True)
class TailEstimate:
    """Monte-Carlo tail P(Poi(V_n) >= u) on a grid and its log-log slope against ``levels``"""
    u: Tuple[float, ...]
    tail: Tuple[float, ...]
    fit: Optional[FitResult]
    mean: float
    levels: Tuple[float, ...] = ()


def matched_levels(u_grid: Sequence[float], exponent: float) -> np.ndarray:
    """
    Mixing levels (Gamma(u) / Gamma(u - s))^{1/s} of the Poisson thresholds u

    P(Poi(V) >= u) = P(V >= G_u) with G_u ~ Gamma(u, 1); when P(V >= v) = C v^{-s}
    the tail equals C Gamma(u - s) / Gamma(u), a pure power of these levels.
    """
    u = np.asarray(u_grid, dtype=np.float64)
    if exponent <= 0 or np.any(u <= exponent):
        raise ValueError(f"matched levels need 0 < s < min(u), got s={exponent}, min(u)={u.min()}")
    return np.exp((gammaln(u) - gammaln(u - exponent)) / exponent)


def poi_vn_tail_estimate(off: SizeBiasedOffspring, u_grid: Sequence[float], trials: int,
                         rng: np.random.Generator, exponent: Optional[float] = None) -> TailEstimate:
    """
    Empirical tail of Poi(V_n) at each u and the least-squares slope of log tail on log level

    The levels are u itself, or ``matched_levels(u, exponent)`` when an exponent
    is given, which removes the Poisson smoothing from the slope.
    """
    draws = np.sort(off.sample_offspring(trials, rng))
    u = np.asarray(u_grid, dtype=np.float64)
    tail = (draws.size - np.searchsorted(draws, u, side="left")) / draws.size
    levels = u if exponent is None else matched_levels(u, exponent)
    usable = u >= 1.0
    try:
        fit = loglog_fit(levels[usable], tail[usable])
    except ValueError as e:
        logger.warning(f"Tail fit unavailable: {e}")
        fit = None
    return TailEstimate(u=tuple(u.tolist()), tail=tuple(tail.tolist()), fit=fit, mean=float(draws.mean()),
                        levels=tuple(levels.tolist()))


def offspring_pmf_distance(samples: Sequence[int], exact: np.ndarray) -> float:
    """TV distance between sampled offspring counts and an exact pmf on 0..len(exact)-1"""
    counts = np.bincount(np.asarray(samples, dtype=np.int64))
    size = max(counts.size, exact.size)
    empirical = np.zeros(size)
    empirical[:counts.size] = counts / counts.sum()
    reference = np.zeros(size)
    reference[:exact.size] = exact
    # Exact mass beyond the table is a TV contribution of its own
    missing = max(0.0, 1.0 - float(exact.sum()))
    return 0.5 * (float(np.abs(empirical - reference).sum()) + missing)


def summarize_heights(samples: List[HeightSample]) -> Tuple[float, int, int]:
    """Mean height, number capped and number censored"""
    heights = np.asarray([s.height for s in samples], dtype=np.float64)
    return float(heights.mean()), sum(s.capped for s in samples), sum(s.censored for s in samples)
