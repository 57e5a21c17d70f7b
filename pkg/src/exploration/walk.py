"""
Size-biased breadth-first walks and the explorations they drive
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from tqdm import tqdm

from ..mst import TreeStructure
from ..weights import WeightSequence, derived_stats

START_MINUS = "minus"
START_VERTEX1 = "vertex1"


@dataclass(frozen=True, eq=False)
class WalkTrace:
    """
    Z(u) = offset - u + sum of x_j over the jump times xi_j <= u

    Jumps are stored sorted by time; ``labels[k]`` is the vertex jumping at
    ``xi[k]`` and ``sizes[k]`` its rescaled weight x.
    """
    xi: np.ndarray
    sizes: np.ndarray
    labels: np.ndarray
    offset: float
    lam: float
    x1: float

    @property
    def start(self) -> str:
        return START_MINUS if self.offset == 0.0 else START_VERTEX1

    def value(self, u) -> np.ndarray:
        """Right-continuous evaluation of Z at one or more times"""
        u = np.asarray(u, dtype=np.float64)
        cum = np.concatenate([[0.0], np.cumsum(self.sizes)])
        jumped = np.searchsorted(self.xi, u, side="right")
        return self.offset - u + cum[jumped]

    def left_value(self, u) -> np.ndarray:
        """Left limit Z(u-)"""
        u = np.asarray(u, dtype=np.float64)
        cum = np.concatenate([[0.0], np.cumsum(self.sizes)])
        jumped = np.searchsorted(self.xi, u, side="left")
        return self.offset - u + cum[jumped]

    def hitting_time(self) -> float:
        """
        First time Z reaches 0 when started from x_1

        Z falls at unit speed from the level reached after k jumps, so it hits
        zero before jump k + 1 exactly when xi_{k+1} exceeds offset plus the
        first k sizes.
        """
        if self.offset <= 0.0:
            raise ValueError("the hitting time is defined for walks started at x_1")
        reach = self.offset + np.concatenate([[0.0], np.cumsum(self.sizes)])
        late = np.flatnonzero(self.xi > reach[:-1])
        return float(reach[late[0]] if late.size else reach[-1])


def sample_walk(seq: WeightSequence, lam: float, start: str, rng: np.random.Generator) -> WalkTrace:
    """
    Draw xi_j ~ Exp(theta_{j,lambda}) for j = 2..n

    Args:
        seq: Weight sequence
        lam: Critical-window parameter, nonnegative
        start: ``minus`` (offset 0) or ``vertex1`` (offset x_1)
        rng: Random generator
    """
    if start not in (START_MINUS, START_VERTEX1):
        raise ValueError(f"start must be {START_MINUS!r} or {START_VERTEX1!r}, got {start!r}")
    _, view, _ = derived_stats(seq, lam)
    theta = view.theta_lambda[1:]
    xi = rng.exponential(1.0 / theta)
    order = np.argsort(xi, kind="stable")
    return WalkTrace(
        xi=xi[order],
        sizes=view.x[1:][order],
        labels=np.arange(2, seq.n + 1, dtype=np.int64)[order],
        offset=float(view.x[0]) if start == START_VERTEX1 else 0.0,
        lam=float(lam),
        x1=float(view.x[0]),
    )


@dataclass(frozen=True)
class ExploredComponent:
    """A breadth-first tree read off a walk, with its mass and its time window"""
    tree: TreeStructure
    mass: float
    start: float
    end: float


def _explore(trace: WalkTrace, first: int, root: int, begin: float, root_size: float) -> Tuple[ExploredComponent, int]:
    """
    Explore one component from jump index ``first`` with the root's interval starting at ``begin``

    The k-th explored vertex owns the interval (S_{k-1}, S_k] of length x;
    each jump time falling in it makes its vertex a child of the owner.
    """
    xi = trace.xi.tolist()
    sizes = trace.sizes.tolist()
    labels = trace.labels.tolist()

    owners = [root]
    ends = [begin + root_size]
    parent = {}
    masses = [root_size]
    owner = 0
    k = first
    while k < len(xi) and xi[k] <= ends[-1]:
        while xi[k] > ends[owner]:
            owner += 1
        v = labels[k]
        parent[v] = owners[owner]
        owners.append(v)
        ends.append(ends[-1] + sizes[k])
        masses.append(sizes[k])
        k += 1

    tree = TreeStructure(root=root, parent=parent)
    return ExploredComponent(tree=tree, mass=math.fsum(masses), start=begin, end=ends[-1]), k


def explore_from_vertex1(trace: WalkTrace) -> ExploredComponent:
    """Breadth-first tree of the component of vertex 1 coupled to a vertex-1 walk"""
    if trace.start != START_VERTEX1:
        raise ValueError("exploration from vertex 1 needs a walk started at x_1")
    component, _ = _explore(trace, 0, 1, 0.0, trace.x1)
    return component


def explore_minus(trace: WalkTrace) -> List[ExploredComponent]:
    """
    All components of the graph on [n] minus {1}, in order of exploration

    A new component is rooted at the next unexplored jump time; it is
    exhausted when no jump time falls before the end of the last interval.
    """
    components = []
    k = 0
    xi = trace.xi
    while k < xi.size:
        root = int(trace.labels[k])
        component, k = _explore(trace, k + 1, root, float(xi[k]), float(trace.sizes[k]))
        components.append(component)
    return components


def positive_excursions(trace: WalkTrace) -> List[Tuple[float, float]]:
    """Maximal intervals on which Z is strictly positive"""
    intervals = []
    xi = trace.xi.tolist()
    after = trace.value(trace.xi).tolist()
    begin: Optional[float] = 0.0 if trace.offset > 0 else None
    level = trace.offset
    time = 0.0
    for k, t in enumerate(xi):
        before = level - (t - time)
        if begin is not None and before <= 0.0:
            intervals.append((begin, time + level))
            begin = None
        if begin is None and after[k] > 0.0:
            begin = t
        level, time = after[k], t
    if begin is not None:
        intervals.append((begin, time + level))
    return intervals


@dataclass(frozen=True)
class HittingCheck:
    """Largest gap between the walk's hitting time and the explored mass of C(1)"""
    max_discrepancy: float
    trials: int


def hitting_mass_check(seq: WeightSequence, lam: float, trials: int, rng: np.random.Generator,
                       show_progress: bool = False) -> HittingCheck:
    """Compare hitting time and component mass over ``trials`` coupled runs"""
    worst = 0.0
    for _ in tqdm(range(trials), desc="Hitting times", unit="trial", disable=not show_progress):
        trace = sample_walk(seq, lam, START_VERTEX1, rng)
        component = explore_from_vertex1(trace)
        worst = max(worst, abs(trace.hitting_time() - component.mass))
    logger.debug(f"Hitting-time check n={seq.n}, lambda={lam}: max discrepancy {worst:.3g} over {trials} trials")
    return HittingCheck(max_discrepancy=worst, trials=trials)
