"""
Multitype branching process trees on a set of vertex types and their pruning couplings
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np
from loguru import logger

from ..mst import TreeStructure, tree_from_parent_array
from ..weights import WeightSequence, derived_stats, p_lambda
from .offspring import AliasTable, SizeBiasedOffspring, offspring_pmf_distance


@dataclass(frozen=True)
class TypedTree:
    """
    A sampled MTBP tree stored as flat arrays over nodes 0..N-1 in breadth-first order

    Node 0 is the root. ``offspring[k]`` is the number of children drawn for
    node k, or -1 when node k was never expanded. ``truncated`` is set when
    the generation cap or the population budget stopped the growth while
    unexpanded or childbearing nodes remained.
    """
    parent: np.ndarray
    types: np.ndarray
    depth: np.ndarray
    offspring: np.ndarray
    truncated: bool

    @property
    def size(self) -> int:
        return int(self.types.size)

    def generation_sizes(self) -> List[int]:
        return np.bincount(self.depth).tolist()

    def erased_offspring(self) -> np.ndarray:
        """Children counts of the expanded non-root nodes, forgetting types"""
        counts = self.offspring[1:]
        return counts[counts >= 0]

    def to_tree(self) -> TreeStructure:
        """Node k becomes label k + 1; edge weights are unset"""
        parents = np.full(self.size + 1, -1, dtype=np.int64)
        parents[2:] = self.parent[1:] + 1
        return tree_from_parent_array(parents, root=1)


def mtbp_rate(seq: WeightSequence, lam: float, delta: float) -> float:
    """The percolation factor p^n_{(1 + delta) lambda}, unclamped"""
    if lam < 0 or delta < 0:
        raise ValueError(f"lambda and delta must be nonnegative, got {lam}, {delta}")
    return p_lambda(seq, (1.0 + delta) * lam)


def mtbp_sample(seq: WeightSequence, lam: float, delta: float, type_space: Iterable[int], root: int,
                max_gen: int, rng: np.random.Generator, population_budget: Optional[int] = None) -> TypedTree:
    """
    Sample the MTBP with types in ``type_space`` started from one vertex of type ``root``

    A type-j vertex has Poi(p w_j w_k / ell_n) children of type k for every k
    in the type space, p = p^n_{(1+delta)lambda}. Children are drawn as one
    Poisson with the summed rate p w_j W_D / ell_n whose types are then
    chosen independently with probability w_k / W_D.

    Nodes at depth ``max_gen`` are never expanded and keep offspring -1, so
    every count >= 0 equals the number of children present in the tree.
    ``truncated`` is set when unexpanded nodes remain at the cap or budget.
    """
    types_arr = np.asarray(sorted(set(int(v) for v in type_space)), dtype=np.int64)
    if types_arr.size == 0:
        raise ValueError("type space must be nonempty")
    if root not in set(types_arr.tolist()):
        raise ValueError(f"root type {root} is not in the type space")
    if types_arr[0] < 1 or types_arr[-1] > seq.n:
        raise ValueError(f"types must be vertex labels in 1..{seq.n}")
    if max_gen < 0:
        raise ValueError(f"max_gen must be nonnegative, got {max_gen}")

    derived, _, _ = derived_stats(seq)
    w_types = seq.w[types_arr - 1]
    w_space = float(np.sum(w_types))
    factor = mtbp_rate(seq, lam, delta) * w_space / derived.ell_n
    table = AliasTable(w_types)

    parents: List[np.ndarray] = [np.asarray([-1], dtype=np.int64)]
    types: List[np.ndarray] = [np.asarray([root], dtype=np.int64)]
    depths: List[np.ndarray] = [np.asarray([0], dtype=np.int64)]
    counts: List[np.ndarray] = []

    generation_ids = np.asarray([0], dtype=np.int64)
    generation_types = types[0]
    size = 1
    truncated = True
    for depth in range(max_gen):
        if population_budget is not None and size > population_budget:
            break
        offspring = rng.poisson(factor * seq.w[generation_types - 1])
        counts.append(offspring)
        total = int(offspring.sum())
        if total == 0:
            truncated = False
            break
        child_types = types_arr[table.sample(total, rng)]
        child_ids = np.arange(size, size + total, dtype=np.int64)
        parents.append(np.repeat(generation_ids, offspring))
        types.append(child_types)
        depths.append(np.full(total, depth + 1, dtype=np.int64))
        size += total
        generation_ids, generation_types = child_ids, child_types

    expanded = np.concatenate(counts) if counts else np.empty(0, dtype=np.int64)
    offspring_all = np.full(size, -1, dtype=np.int64)
    offspring_all[:expanded.size] = expanded
    if truncated:
        logger.debug(f"MTBP truncated at {size} nodes (max_gen={max_gen}, budget={population_budget})")
    return TypedTree(
        parent=np.concatenate(parents),
        types=np.concatenate(types),
        depth=np.concatenate(depths),
        offspring=offspring_all,
        truncated=truncated,
    )


def prune(tree: TypedTree, keep: np.ndarray) -> TypedTree:
    """
    Remove every node with ``keep`` false together with its subtree

    The root is always kept. Offspring counts of surviving nodes are recounted
    over surviving children; nodes that were never expanded stay at -1.
    """
    keep = np.asarray(keep, dtype=bool)
    if keep.size != tree.size:
        raise ValueError(f"keep mask has {keep.size} entries for {tree.size} nodes")
    alive = keep.copy()
    alive[0] = True
    # Breadth-first order puts parents before children
    for k in range(1, tree.size):
        if not alive[tree.parent[k]]:
            alive[k] = False

    old_ids = np.flatnonzero(alive)
    remap = np.full(tree.size, -1, dtype=np.int64)
    remap[old_ids] = np.arange(old_ids.size)
    parent = remap[tree.parent[old_ids[1:]]]
    survivors = np.bincount(parent, minlength=old_ids.size).astype(np.int64)
    expanded = tree.offspring[old_ids] >= 0
    offspring = np.where(expanded, survivors, -1)
    return TypedTree(
        parent=np.concatenate(([-1], parent)).astype(np.int64),
        types=tree.types[old_ids],
        depth=tree.depth[old_ids],
        offspring=offspring,
        truncated=tree.truncated,
    )


def restrict_types(tree: TypedTree, type_space: Iterable[int]) -> TypedTree:
    """Prune a D'-tree down to a D-tree by removing nodes whose type is outside D"""
    return prune(tree, np.isin(tree.types, np.asarray(list(type_space), dtype=np.int64)))


def killing_factor(seq: WeightSequence, lam: float, delta: float) -> float:
    """zeta = 1 + (1 + delta) lambda n^{-eta}, the ratio of the lambda and zero rates"""
    return 1.0 + (1.0 + delta) * lam * seq.n ** (-seq.constants.eta)


def kill(tree: TypedTree, zeta: float, rng: np.random.Generator) -> TypedTree:
    """Keep each non-root node independently with probability 1 / zeta"""
    if zeta < 1.0:
        raise ValueError(f"zeta must be at least 1, got {zeta}")
    return prune(tree, rng.random(tree.size) < 1.0 / zeta)


def generations_contained(small: TypedTree, large: TypedTree) -> bool:
    """True when every generation of ``small`` is no larger than that of ``large``"""
    a, b = small.generation_sizes(), large.generation_sizes()
    return len(a) <= len(b) and all(x <= y for x, y in zip(a, b))


def type_erasure_distance(seq: WeightSequence, samples: int, rng: np.random.Generator,
                          root: int = 2) -> float:
    """
    TV distance between type-erased non-root offspring counts and Poi(V_n)

    Trees use type space [n] minus {1} at lambda = delta = 0 and are grown two
    generations deep, so the depth-one nodes are expanded, until ``samples``
    counts are collected.
    """
    if seq.n < 2:
        raise ValueError("type erasure needs at least two vertices")
    off = SizeBiasedOffspring.from_weights(seq)
    space = range(2, seq.n + 1)
    collected: List[np.ndarray] = []
    total = 0
    while total < samples:
        tree = mtbp_sample(seq, 0.0, 0.0, space, root, 2, rng)
        counts = tree.erased_offspring()
        collected.append(counts)
        total += counts.size
    draws = np.concatenate(collected)[:samples]
    return offspring_pmf_distance(draws, off.pmf(int(draws.max()) + 20))


def superposition_counts(seq: WeightSequence, lam: float, delta: float, type_space: Sequence[int], root: int,
                         trials: int, rng: np.random.Generator) -> np.ndarray:
    """Root children counts over independent trees grown one generation"""
    return np.asarray([
        int(mtbp_sample(seq, lam, delta, type_space, root, 1, rng).offspring[0])
        for _ in range(trials)
    ], dtype=np.int64)
