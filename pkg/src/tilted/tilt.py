"""
Permitted pairs, the f-function and the tilt L(t) of ordered trees, with exact and MCMC tilted samplers
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
from loguru import logger

from .trees import (
    MAX_ENUMERATION,
    OrderedKey,
    OrderedTree,
    ProbabilityVector,
    enumerate_ordered_trees,
    ordered_probability,
    sample_ordered_ptree,
)

MODE_EXACT = "exact-small"
MODE_MCMC = "mcmc"
SAMPLER_MODES = (MODE_EXACT, MODE_MCMC)

Pair = Tuple[int, int]


def permitted_pairs(t: OrderedTree) -> Set[Pair]:
    """
    Pairs (i, j) where the parent of j is a strict ancestor of i and j sits to
    the right of the root path of i
    """
    pairs: Set[Pair] = set()
    for i in t.children:
        path = t.ancestors(i)
        for a, towards_i in zip(path, path[1:]):
            kids = t.children[a]
            for j in kids[kids.index(towards_i) + 1:]:
                pairs.add((i, j))
    return pairs


@dataclass(frozen=True, eq=False)
class FFunction:
    """
    Step function on [0, 1): vertices in depth-first order take consecutive
    intervals of length q_v, on which f equals the q-mass still waiting on
    the exploration stack
    """
    order: Tuple[int, ...]
    breakpoints: np.ndarray
    values: np.ndarray

    def integral(self) -> float:
        return float(math.fsum(np.diff(self.breakpoints) * self.values))

    def sup(self) -> float:
        return float(self.values.max()) if self.values.size else 0.0

    def __call__(self, s: float) -> float:
        if not 0.0 <= s < 1.0:
            raise ValueError(f"f is defined on [0, 1), got {s}")
        k = int(np.searchsorted(self.breakpoints, s, side="right")) - 1
        return float(self.values[min(k, self.values.size - 1)])


def f_function(t: OrderedTree, pv: ProbabilityVector) -> FFunction:
    """Run the left-first depth-first exploration and record the stack mass after each visit"""
    order: List[int] = []
    values: List[float] = []
    stack = [t.root]
    while stack:
        v = stack.pop()
        order.append(v)
        values.append(math.fsum(pv.of(u) for u in stack))
        stack.extend(reversed(t.children[v]))
    lengths = np.asarray([pv.of(v) for v in order])
    breakpoints = np.concatenate(([0.0], np.cumsum(lengths)))
    return FFunction(order=tuple(order), breakpoints=breakpoints, values=np.asarray(values))


def _edge_factor_log(x: float) -> float:
    """log((e^x - 1) / x), zero at x = 0"""
    if x == 0.0:
        return 0.0
    return math.log(math.expm1(x) / x)


def log_tilt_weight(t: OrderedTree, pv: ProbabilityVector) -> float:
    """log L(t)"""
    a = pv.a
    edges = math.fsum(_edge_factor_log(a * pv.of(c) * pv.of(p)) for c, p in t.parent.items())
    pairs = math.fsum(pv.of(i) * pv.of(j) for i, j in permitted_pairs(t))
    return edges + a * pairs


def tilt_weight(t: OrderedTree, pv: ProbabilityVector) -> float:
    """
    L(t) = prod_{edges} (e^{a q_i q_j} - 1) / (a q_i q_j) * exp(a sum_{P(t)} q_i q_j)

    Always at least one.
    """
    return math.exp(log_tilt_weight(t, pv))


class ExactTiltedLaw:
    """The tilted law P_ord(t) L(t) / E[L] tabulated over every plane tree on 1..m"""

    def __init__(self, pv: ProbabilityVector):
        if pv.m > MAX_ENUMERATION:
            raise ValueError(f"exact tilted law limited to m <= {MAX_ENUMERATION}, got {pv.m}")
        self.pv = pv
        self.trees: List[OrderedTree] = list(enumerate_ordered_trees(pv.m))
        weights = np.asarray([ordered_probability(t, pv) * tilt_weight(t, pv) for t in self.trees])
        self.normalizer = float(weights.sum())
        self.probabilities = weights / self.normalizer

    def law(self) -> Dict[OrderedKey, float]:
        return {t.key(): float(p) for t, p in zip(self.trees, self.probabilities)}

    def sample(self, rng: np.random.Generator) -> OrderedTree:
        return self.trees[int(rng.choice(len(self.trees), p=self.probabilities))]


@lru_cache(maxsize=256)
def _cached_exact_law(q: Tuple[float, ...], a: float) -> ExactTiltedLaw:
    return ExactTiltedLaw(ProbabilityVector(np.asarray(q), a))


def exact_tilted_law(pv: ProbabilityVector) -> ExactTiltedLaw:
    """Memoized ``ExactTiltedLaw`` keyed by the exact q and a"""
    return _cached_exact_law(tuple(pv.q.tolist()), pv.a)


@dataclass(frozen=True, eq=False)
class ChainResult:
    """Thinned states of an independence Metropolis chain with its diagnostics"""
    trees: List[OrderedTree]
    acceptance_rate: float
    log_tilt_trace: np.ndarray


def tilted_chain(pv: ProbabilityVector, samples: int, rng: np.random.Generator,
                 burn_in: int = 200, thin: int = 5) -> ChainResult:
    """
    Independence Metropolis chain targeting P_ord L / E[L]

    Proposals are fresh P_ord trees, accepted with probability min(1, L(t') / L(t)).
    """
    if samples <= 0 or burn_in < 0 or thin <= 0:
        raise ValueError("need samples > 0, burn_in >= 0 and thin > 0")
    current = sample_ordered_ptree(pv, rng)
    current_log = log_tilt_weight(current, pv)
    kept: List[OrderedTree] = []
    trace: List[float] = []
    accepted = 0
    steps = burn_in + samples * thin
    for step in range(1, steps + 1):
        proposal = sample_ordered_ptree(pv, rng)
        proposal_log = log_tilt_weight(proposal, pv)
        if rng.random() < math.exp(min(0.0, proposal_log - current_log)):
            current, current_log = proposal, proposal_log
            accepted += 1
        trace.append(current_log)
        if step > burn_in and (step - burn_in) % thin == 0:
            kept.append(current)

    rate = accepted / steps
    logger.debug(f"Tilted chain m={pv.m}, a={pv.a}: acceptance {rate:.3f}, mean log L {np.mean(trace):.4f}")
    if rate < 0.05:
        logger.warning(f"Tilted chain acceptance rate is low ({rate:.3f}); consider longer thinning")
    return ChainResult(trees=kept, acceptance_rate=rate, log_tilt_trace=np.asarray(trace))


def sample_tilted_ordered(pv: ProbabilityVector, rng: np.random.Generator, mode: Optional[str] = None,
                          burn_in: int = 200, thin: int = 5) -> OrderedTree:
    """
    One draw from the tilted ordered-tree law

    ``mode`` defaults to exact enumeration when m <= 6 and to MCMC otherwise.
    """
    if mode is None:
        mode = MODE_EXACT if pv.m <= MAX_ENUMERATION else MODE_MCMC
    if mode == MODE_EXACT:
        return exact_tilted_law(pv).sample(rng)
    if mode == MODE_MCMC:
        return tilted_chain(pv, 1, rng, burn_in=burn_in, thin=thin).trees[0]
    raise ValueError(f"unknown sampler mode {mode!r}; expected one of {SAMPLER_MODES}")
