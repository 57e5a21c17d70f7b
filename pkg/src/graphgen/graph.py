"""
Sparse simple graphs on 1-based vertex labels and their component partitions
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..weights import as_weight_array


@dataclass(frozen=True, eq=False)
class SparseGraph:
    """
    Undirected simple graph on labels 1..n

    ``edges`` is an (m, 2) array with ``i < j`` in every row. ``weights``
    optionally carries one real per edge (the percolation uniforms).
    ``vertices`` restricts the vertex set; all of 1..n when omitted.
    """
    n: int
    edges: np.ndarray
    weights: Optional[np.ndarray] = None
    vertices: Optional[np.ndarray] = None

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise ValueError("edges must satisfy i < j (no self-loops, normalized order)")
            if edges.min() < 1 or edges.max() > self.n:
                raise ValueError(f"edge endpoint outside 1..{self.n}")
            keys = edges[:, 0] * (self.n + 1) + edges[:, 1]
            if np.unique(keys).size != keys.size:
                raise ValueError("multi-edges are not allowed")
        object.__setattr__(self, "edges", edges)

        if self.weights is not None:
            weights = np.asarray(self.weights, dtype=np.float64)
            if weights.shape != (edges.shape[0],):
                raise ValueError("weights must have one entry per edge")
            object.__setattr__(self, "weights", weights)

        if self.vertices is not None:
            vertices = np.unique(np.asarray(self.vertices, dtype=np.int64))
            active = np.zeros(self.n + 1, dtype=bool)
            active[vertices] = True
            if edges.size and not np.all(active[edges]):
                raise ValueError("edge endpoint outside the vertex set")
            object.__setattr__(self, "vertices", vertices)

    @classmethod
    def from_edge_list(cls, n: int, pairs: Iterable[Tuple[int, int]],
                       weights: Optional[Iterable[float]] = None,
                       vertices: Optional[Iterable[int]] = None) -> "SparseGraph":
        """Build from unordered pairs, sorting each pair and the edge list"""
        arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        arr = np.sort(arr, axis=1)
        order = np.lexsort((arr[:, 1], arr[:, 0]))
        w = None if weights is None else np.asarray(list(weights), dtype=np.float64)[order]
        v = None if vertices is None else np.asarray(list(vertices), dtype=np.int64)
        return cls(n, arr[order], w, v)

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def vertex_set(self) -> np.ndarray:
        if self.vertices is None:
            return np.arange(1, self.n + 1, dtype=np.int64)
        return self.vertices

    @property
    def num_vertices(self) -> int:
        return self.n if self.vertices is None else int(self.vertices.size)

    @cached_property
    def adjacency(self) -> List[List[int]]:
        """Neighbour lists indexed by label; slot 0 is unused"""
        adj: List[List[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.edges.tolist():
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def csr(self) -> csr_matrix:
        """Symmetric (n+1) x (n+1) adjacency matrix"""
        m = self.m
        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        return csr_matrix((np.ones(2 * m, dtype=np.int8), (rows, cols)), shape=(self.n + 1, self.n + 1))

    def degrees(self) -> np.ndarray:
        """Degree per label (index 0 unused)"""
        return np.bincount(self.edges.ravel(), minlength=self.n + 1)

    def edge_weight_map(self) -> Dict[Tuple[int, int], float]:
        if self.weights is None:
            raise ValueError("graph carries no edge weights")
        return {(int(i), int(j)): float(u) for (i, j), u in zip(self.edges, self.weights)}

    def subgraph(self, vertices: Iterable[int]) -> "SparseGraph":
        """Induced subgraph on the given labels"""
        keep = np.unique(np.asarray(list(vertices), dtype=np.int64))
        mask = np.zeros(self.n + 1, dtype=bool)
        mask[keep] = True
        edge_mask = mask[self.edges[:, 0]] & mask[self.edges[:, 1]] if self.m else np.zeros(0, dtype=bool)
        weights = None if self.weights is None else self.weights[edge_mask]
        return SparseGraph(self.n, self.edges[edge_mask], weights, keep)


@dataclass(frozen=True, eq=False)
class ComponentPartition:
    """
    Connected components with vertex counts and weight masses

    ``labels[v]`` is the component id of label v, or -1 for label 0 and for
    vertices outside the graph. Ids are ordered by smallest member label.
    """
    labels: np.ndarray
    counts: np.ndarray
    masses: np.ndarray
    edge_counts: np.ndarray

    @property
    def num_components(self) -> int:
        return int(self.counts.size)

    def component_of(self, vertex: int) -> int:
        return int(self.labels[vertex])

    def members(self, component: int) -> np.ndarray:
        return np.flatnonzero(self.labels == component)

    def surplus(self) -> np.ndarray:
        """|E| - |V| + 1 per component"""
        return self.edge_counts - self.counts + 1


@dataclass(frozen=True, eq=False)
class GiantRecord:
    """The component of vertex 1 and the largest mass among the others"""
    vertices: np.ndarray
    count: int
    mass: float
    surplus: int
    max_other_mass: float


def components(g: SparseGraph, weights) -> ComponentPartition:
    """Label the connected components of ``g`` and weigh them with ``weights``"""
    w = as_weight_array(weights)
    if w.size < g.n:
        raise ValueError(f"need {g.n} vertex weights, got {w.size}")

    _, raw = connected_components(g.csr(), directed=False)
    active = g.vertex_set()
    _, compact = np.unique(raw[active], return_inverse=True)

    labels = np.full(g.n + 1, -1, dtype=np.int64)
    labels[active] = compact
    num = int(compact.max()) + 1 if compact.size else 0
    counts = np.bincount(compact, minlength=num)
    masses = np.bincount(compact, weights=w[active - 1], minlength=num)
    edge_counts = np.bincount(labels[g.edges[:, 0]], minlength=num) if g.m else np.zeros(num, dtype=np.int64)
    return ComponentPartition(labels=labels, counts=counts, masses=masses, edge_counts=edge_counts)


def giant(g: SparseGraph, weights, partition: Optional[ComponentPartition] = None) -> GiantRecord:
    """Component of vertex 1 with its mass; also the maximal mass of every other component"""
    partition = partition or components(g, weights)
    cid = partition.component_of(1)
    if cid < 0:
        raise ValueError("vertex 1 is not a vertex of this graph")

    others = np.delete(partition.masses, cid)
    return GiantRecord(
        vertices=partition.members(cid),
        count=int(partition.counts[cid]),
        mass=float(partition.masses[cid]),
        surplus=int(partition.surplus()[cid]),
        max_other_mass=float(others.max()) if others.size else 0.0,
    )
