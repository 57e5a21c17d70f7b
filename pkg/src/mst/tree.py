"""
Rooted trees with parent links, used for spanning trees, p-trees and exploration trees
"""

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
from loguru import logger

from ..graphgen import SparseGraph

Edge = Tuple[int, int]


def normalize_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True, eq=False)
class TreeStructure:
    """
    A tree on integer labels, rooted at ``root``

    ``parent`` maps every non-root vertex to its parent; ``edge_weight``
    optionally maps a non-root vertex to the weight of its parent edge.
    """
    root: int
    parent: Dict[int, int]
    edge_weight: Dict[int, float] = field(default_factory=dict)

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Iterable[Edge], root: Optional[int] = None,
                   weights: Optional[Dict[Edge, float]] = None) -> "TreeStructure":
        """
        Orient an undirected edge set away from ``root`` (smallest label by default)

        Raises:
            ValueError: if the edges do not form a spanning tree of ``vertices``
        """
        vertex_list = sorted(set(int(v) for v in vertices))
        if not vertex_list:
            raise ValueError("a tree needs at least one vertex")
        edge_list = [normalize_edge(int(i), int(j)) for i, j in edges]
        if len(edge_list) != len(vertex_list) - 1:
            raise ValueError(f"{len(edge_list)} edges cannot span {len(vertex_list)} vertices as a tree")

        adj: Dict[int, List[int]] = {v: [] for v in vertex_list}
        for i, j in edge_list:
            if i not in adj or j not in adj:
                raise ValueError(f"edge ({i}, {j}) leaves the vertex set")
            adj[i].append(j)
            adj[j].append(i)

        root = vertex_list[0] if root is None else int(root)
        if root not in adj:
            raise ValueError(f"root {root} is not a vertex")

        parent: Dict[int, int] = {}
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    parent[u] = v
                    queue.append(u)
        if len(seen) != len(vertex_list):
            raise ValueError("edge set is not connected")

        edge_weight = {}
        if weights is not None:
            edge_weight = {v: float(weights[normalize_edge(v, p)]) for v, p in parent.items()}
        return cls(root=root, parent=parent, edge_weight=edge_weight)

    @classmethod
    def singleton(cls, vertex: int) -> "TreeStructure":
        return cls(root=int(vertex), parent={})

    @property
    def size(self) -> int:
        return len(self.parent) + 1

    @cached_property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted([self.root, *self.parent]))

    def edges(self) -> List[Edge]:
        """Sorted list of normalized edges"""
        return sorted(normalize_edge(v, p) for v, p in self.parent.items())

    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges())

    def weight_of(self, i: int, j: int) -> float:
        """Weight of the tree edge {i, j}"""
        if self.parent.get(i) == j:
            return self.edge_weight[i]
        if self.parent.get(j) == i:
            return self.edge_weight[j]
        raise KeyError(f"({i}, {j}) is not a tree edge")

    def total_weight(self) -> float:
        return math.fsum(self.edge_weight.values())

    @cached_property
    def adjacency(self) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for v, p in self.parent.items():
            adj[v].append(p)
            adj[p].append(v)
        return adj

    @cached_property
    def children(self) -> Dict[int, List[int]]:
        kids: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for v, p in sorted(self.parent.items()):
            kids[p].append(v)
        return kids

    @cached_property
    def depth(self) -> Dict[int, int]:
        """Hop distance from the root"""
        depth = {self.root: 0}
        for v in self.bfs_order[1:]:
            depth[v] = depth[self.parent[v]] + 1
        return depth

    @cached_property
    def bfs_order(self) -> Tuple[int, ...]:
        order = [self.root]
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for c in self.children[v]:
                order.append(c)
                queue.append(c)
        return tuple(order)

    def height(self) -> int:
        return max(self.depth.values())

    def path(self, u: int, v: int) -> List[int]:
        """Vertices on the tree path from u to v"""
        depth = self.depth
        left, right = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = self.parent[a]
            left.append(a)
        while depth[b] > depth[a]:
            b = self.parent[b]
            right.append(b)
        while a != b:
            a = self.parent[a]
            b = self.parent[b]
            left.append(a)
            right.append(b)
        return left + right[-2::-1]

    def distance(self, u: int, v: int) -> int:
        return len(self.path(u, v)) - 1

    def restrict(self, vertices: Iterable[int]) -> "TreeStructure":
        """
        The subtree induced on ``vertices``, rooted at its vertex closest to the root

        Raises:
            ValueError: if the induced edge set is not connected
        """
        keep = set(int(v) for v in vertices)
        missing = keep.difference(self.vertices)
        if missing:
            raise ValueError(f"{len(missing)} vertices are not in the tree")
        edges = [(v, p) for v, p in self.parent.items() if v in keep and p in keep]
        root = min(keep, key=lambda v: (self.depth[v], v))
        weights = {normalize_edge(v, p): self.edge_weight[v] for v, p in edges} if self.edge_weight else None
        return TreeStructure.from_edges(keep, edges, root=root, weights=weights)

    def to_graph(self, n: Optional[int] = None) -> SparseGraph:
        """The tree as a SparseGraph on labels 1..n (max label by default)"""
        n = max(self.vertices) if n is None else n
        weights = [self.weight_of(i, j) for i, j in self.edges()] if self.edge_weight else None
        return SparseGraph.from_edge_list(n, self.edges(), weights=weights, vertices=self.vertices)

    def to_file(self, path: Path):
        """
        First line the vertex count, then "child parent weight" per non-root vertex

        A single-vertex tree writes its root label on the second line.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{self.size}\n")
            if not self.parent:
                f.write(f"{self.root}\n")
            for v in sorted(self.parent):
                w = self.edge_weight.get(v, float("nan"))
                f.write(f"{v} {self.parent[v]} {w:.17g}\n")
        logger.debug(f"Wrote tree with {self.size} vertices to {path}")

    @classmethod
    def from_file(cls, path: Path) -> "TreeStructure":
        path = Path(path)
        with open(path, "r", encoding="utf-8") as f:
            lines = [line.split() for line in f if line.strip()]
        if not lines:
            raise ValueError(f"{path}: empty tree file")
        size = int(lines[0][0])
        body = lines[1:]
        if size == 1:
            return cls.singleton(int(body[0][0]))

        parent = {int(r[0]): int(r[1]) for r in body}
        weights = {int(r[0]): float(r[2]) for r in body if not math.isnan(float(r[2]))}
        roots = set(parent.values()).difference(parent)
        if len(parent) != size - 1 or len(roots) != 1:
            raise ValueError(f"{path}: parent lines do not describe a tree on {size} vertices")
        tree = cls.from_edges([*parent, *roots], parent.items(), root=roots.pop())
        return cls(root=tree.root, parent=tree.parent, edge_weight=weights)


def forest_edge_set(forest: Iterable[TreeStructure]) -> FrozenSet[Edge]:
    """Union of the edge sets of a forest"""
    out = set()
    for tree in forest:
        out.update(tree.edges())
    return frozenset(out)


def total_weight(forest: Iterable[TreeStructure]) -> float:
    return math.fsum(t.total_weight() for t in forest)


def tree_from_parent_array(parents: np.ndarray, root: int, weights: Optional[np.ndarray] = None) -> TreeStructure:
    """Build from an array where ``parents[v]`` is the parent label of v (-1 marks the root or absent labels)"""
    parent = {int(v): int(p) for v, p in enumerate(parents) if p >= 0 and v != root}
    edge_weight = {} if weights is None else {v: float(weights[v]) for v in parent}
    return TreeStructure(root=root, parent=parent, edge_weight=edge_weight)
