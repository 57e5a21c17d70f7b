"""
Probability vectors, ordered (plane) trees and p-tree samplers on the labels 1..m
"""

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from ..mst import TreeStructure

# Enumeration of all rooted or plane trees is offered up to this many labels
MAX_ENUMERATION = 6

RootedKey = Tuple[int, Tuple[Tuple[int, int], ...]]
OrderedKey = Tuple[int, Tuple[Tuple[int, Tuple[int, ...]], ...]]


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """
    Positive q_1..q_m summing to one, plus the tilt parameter a

    ``q`` is stored 0-based: q[v - 1] is the mass of label v.
    """
    q: np.ndarray
    a: float

    def __post_init__(self):
        q = np.asarray(self.q, dtype=np.float64)
        if q.ndim != 1 or q.size == 0:
            raise ValueError("q must be a nonempty 1-d vector")
        if np.any(q <= 0):
            raise ValueError("every q_v must be positive")
        if abs(math.fsum(q) - 1.0) > 1e-12:
            raise ValueError(f"q must sum to 1, got {math.fsum(q):.15g}")
        if self.a <= 0:
            raise ValueError(f"a must be positive, got {self.a}")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "a", float(self.a))

    @classmethod
    def from_masses(cls, masses: Sequence[float], a: float) -> "ProbabilityVector":
        """Normalize positive masses into a probability vector"""
        arr = np.asarray(masses, dtype=np.float64)
        return cls(arr / math.fsum(arr), a)

    @classmethod
    def uniform(cls, m: int, a: float) -> "ProbabilityVector":
        return cls(np.full(m, 1.0 / m), a)

    @property
    def m(self) -> int:
        return int(self.q.size)

    def of(self, v: int) -> float:
        return float(self.q[v - 1])

    @property
    def q_max(self) -> float:
        return float(self.q.max())

    @property
    def norm2(self) -> float:
        return float(np.sqrt(np.sum(self.q * self.q)))


@dataclass(frozen=True, eq=False)
class OrderedTree:
    """
    A rooted tree on 1..m whose children lists are ordered left to right

    ``children`` maps every label (leaves included) to its ordered children.
    """
    root: int
    children: Dict[int, Tuple[int, ...]]

    def __post_init__(self):
        labels = sorted(self.children)
        m = len(labels)
        if labels != list(range(1, m + 1)):
            raise ValueError("an ordered tree must be labeled by a permutation of 1..m")
        seen = [self.root]
        stack = [self.root]
        while stack:
            v = stack.pop()
            for c in self.children[v]:
                seen.append(c)
                stack.append(c)
        if sorted(seen) != labels:
            raise ValueError("children lists do not describe a tree spanning 1..m")

    @classmethod
    def from_tree(cls, tree: TreeStructure, orders: Dict[int, Sequence[int]] = None) -> "OrderedTree":
        """Order children as given in ``orders``, ascending labels otherwise"""
        orders = orders or {}
        return cls(
            root=tree.root,
            children={v: tuple(orders.get(v, tree.children[v])) for v in tree.vertices},
        )

    @property
    def m(self) -> int:
        return len(self.children)

    @cached_property
    def parent(self) -> Dict[int, int]:
        return {c: v for v, kids in self.children.items() for c in kids}

    def degree(self, v: int) -> int:
        """d_v: the number of children of v"""
        return len(self.children[v])

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((min(c, p), max(c, p)) for c, p in self.parent.items())

    def preorder(self) -> List[int]:
        """Depth-first order, leftmost child first"""
        order = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(self.children[v]))
        return order

    def ancestors(self, v: int) -> List[int]:
        """Root path of v, from the root down to v itself"""
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path[::-1]

    def to_tree(self) -> TreeStructure:
        return TreeStructure(root=self.root, parent=dict(self.parent))

    def key(self) -> OrderedKey:
        return self.root, tuple(sorted(self.children.items()))

    def rooted_key(self) -> RootedKey:
        return rooted_key(self.to_tree())


def rooted_key(tree: TreeStructure) -> RootedKey:
    """Hashable identity of a rooted labeled tree, ignoring child order"""
    return tree.root, tuple(sorted(tree.parent.items()))


def ptree_probability(tree: TreeStructure, pv: ProbabilityVector) -> float:
    """P_tree(t) = prod_v q_v^{d_v(t)}"""
    return math.prod(pv.of(v) ** len(kids) for v, kids in tree.children.items())


def ordered_probability(tree: OrderedTree, pv: ProbabilityVector) -> float:
    """P_ord(t) = prod_v q_v^{d_v(t)} / d_v(t)!"""
    return math.prod(pv.of(v) ** len(kids) / math.factorial(len(kids)) for v, kids in tree.children.items())


def sample_ptree(pv: ProbabilityVector, rng: np.random.Generator) -> TreeStructure:
    """
    Draw a rooted tree on 1..m with law P_tree by the birthday construction

    Draw i.i.d. labels Y_0, Y_1, ... from q. Y_0 is the root and every label
    seen for the first time at step k hangs below Y_{k-1}. Stops once all m
    labels have appeared.
    """
    m = pv.m
    if m == 1:
        return TreeStructure.singleton(1)
    parent: Dict[int, int] = {}
    seen = np.zeros(m + 1, dtype=bool)
    labels = np.arange(1, m + 1)
    previous = int(rng.choice(labels, p=pv.q))
    root = previous
    seen[root] = True
    remaining = m - 1
    batch = max(4 * m, 64)
    while remaining:
        for y in rng.choice(labels, size=batch, p=pv.q).tolist():
            if not seen[y]:
                seen[y] = True
                parent[y] = previous
                remaining -= 1
                if not remaining:
                    break
            previous = y
    return TreeStructure(root=root, parent=parent)


def sample_ordered_ptree(pv: ProbabilityVector, rng: np.random.Generator) -> OrderedTree:
    """P_ord: a p-tree whose children lists are put in uniformly random order"""
    tree = sample_ptree(pv, rng)
    orders = {v: tuple(rng.permutation(kids).tolist()) for v, kids in tree.children.items() if len(kids) > 1}
    return OrderedTree.from_tree(tree, orders)


def enumerate_rooted_trees(m: int) -> Iterator[TreeStructure]:
    """Every rooted labeled tree on 1..m (m^{m-1} of them)"""
    if not 1 <= m <= MAX_ENUMERATION:
        raise ValueError(f"enumeration supports 1 <= m <= {MAX_ENUMERATION}, got {m}")
    labels = range(1, m + 1)
    for root in labels:
        others = [v for v in labels if v != root]
        for choice in itertools.product(labels, repeat=len(others)):
            parent = dict(zip(others, choice))
            if any(v == p for v, p in parent.items()):
                continue
            if _reaches_root(parent, root):
                yield TreeStructure(root=root, parent=parent)


def _reaches_root(parent: Dict[int, int], root: int) -> bool:
    for v in parent:
        steps = 0
        while v != root:
            v = parent[v]
            steps += 1
            if steps > len(parent):
                return False
    return True


def enumerate_ordered_trees(m: int) -> Iterator[OrderedTree]:
    """Every plane tree on 1..m: each rooted tree with every ordering of its children lists"""
    for tree in enumerate_rooted_trees(m):
        families = [(v, kids) for v, kids in tree.children.items() if len(kids) > 1]
        for perms in itertools.product(*(itertools.permutations(kids) for _, kids in families)):
            yield OrderedTree.from_tree(tree, {v: p for (v, _), p in zip(families, perms)})


def exact_ptree_law(pv: ProbabilityVector) -> Dict[RootedKey, float]:
    """P_tree over all rooted trees on 1..m"""
    return {rooted_key(t): ptree_probability(t, pv) for t in enumerate_rooted_trees(pv.m)}


def degree_marginals(law: Dict[RootedKey, float], m: int) -> np.ndarray:
    """Matrix [v - 1, d] of P(d_v = d) under a rooted-tree law"""
    out = np.zeros((m, m))
    for (root, pairs), prob in law.items():
        degrees = np.zeros(m + 1, dtype=np.int64)
        for _, p in pairs:
            degrees[p] += 1
        out[np.arange(m), degrees[1:]] += prob
    return out
