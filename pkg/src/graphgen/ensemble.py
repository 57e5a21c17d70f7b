"""
Percolation ensemble: the product-kernel graph with one uniform per edge
"""

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
from loguru import logger

from ..utils.rng import STREAM_ENSEMBLE, STREAM_UNIFORMS, substream
from ..weights import WeightSequence, derived_stats
from .graph import SparseGraph
from .sampling import KERNEL_PRODUCT, product_edge_mean, skip_sample

KERNEL_FULL_L = "product-full-L"
KERNEL_MINUS_ELL = "product-minus-ell"
KERNEL_TAGS = (KERNEL_FULL_L, KERNEL_MINUS_ELL)

DEFAULT_EDGE_CAP = 50_000_000


class EdgeBudgetExceeded(ValueError):
    """Raised when the analytic expected edge count exceeds the configured cap"""


def kernel_denominator(seq: WeightSequence, kernel_tag: str) -> float:
    """L_n for the full-L kernel, ell_n for the minus-ell kernel"""
    derived, _, _ = derived_stats(seq)
    if kernel_tag == KERNEL_FULL_L:
        return derived.L_n
    if kernel_tag == KERNEL_MINUS_ELL:
        return derived.ell_n
    raise ValueError(f"unknown kernel tag {kernel_tag!r}, expected one of {KERNEL_TAGS}")


def expected_edge_count(seq: WeightSequence, kernel_tag: str) -> float:
    """Sum over i < j of min(1, w_i w_j / D)"""
    return product_edge_mean(seq.w, 1.0 / kernel_denominator(seq, kernel_tag))


@dataclass(frozen=True, eq=False)
class PercolationEnsemble:
    """
    Edges of the full product-kernel graph with their uniforms

    Rows of ``edges`` are sorted pairs ``i < j`` (1-based), ``u`` holds one
    uniform in (0, 1) per edge. All percolated graphs and spanning trees of a
    replica are read off this one object.
    """
    n: int
    edges: np.ndarray
    u: np.ndarray
    kernel_tag: str
    seed: int = 0

    def __post_init__(self):
        if self.kernel_tag not in KERNEL_TAGS:
            raise ValueError(f"unknown kernel tag {self.kernel_tag!r}")
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        u = np.asarray(self.u, dtype=np.float64)
        if u.shape != (edges.shape[0],):
            raise ValueError("need exactly one uniform per edge")
        if u.size and (u.min() < 0.0 or u.max() > 1.0):
            raise ValueError("edge uniforms must lie in [0, 1]")
        edges.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "u", u)

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def order(self) -> np.ndarray:
        """Edge indices sorted by increasing uniform; shared by every threshold"""
        return np.argsort(self.u, kind="stable")

    @cached_property
    def graph(self) -> SparseGraph:
        """The unpercolated graph with uniforms as edge weights"""
        return SparseGraph(self.n, self.edges, self.u)

    def percolate(self, p: float) -> SparseGraph:
        """Subgraph of the edges with u <= p"""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"percolation parameter must lie in [0, 1], got {p}")
        count = int(np.searchsorted(self.u[self.order], p, side="right"))
        keep = np.sort(self.order[:count])
        return SparseGraph(self.n, self.edges[keep], self.u[keep])

    @cached_property
    def weight_lookup(self) -> Dict[Tuple[int, int], float]:
        """Uniform of each edge keyed by its sorted pair"""
        return self.graph.edge_weight_map()

    def to_file(self, path: Path):
        """Header "n m seed kernel", then "i j u" per edge with 17 significant digits"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{self.n} {self.m} {self.seed} {self.kernel_tag}\n")
            for (i, j), u in zip(self.edges.tolist(), self.u.tolist()):
                f.write(f"{i} {j} {u:.17g}\n")
        logger.debug(f"Wrote ensemble with {self.m} edges to {path}")

    @classmethod
    def from_file(cls, path: Path) -> "PercolationEnsemble":
        path = Path(path)
        with open(path, "r", encoding="utf-8") as f:
            header = f.readline().split()
            if len(header) != 4:
                raise ValueError(f"{path}: malformed header {' '.join(header)!r}")
            n, m, seed, kernel_tag = int(header[0]), int(header[1]), int(header[2]), header[3]
            rows = [line.split() for line in f if line.strip()]

        if len(rows) != m:
            raise ValueError(f"{path}: header announces {m} edges, found {len(rows)}")
        edges = np.array([[int(r[0]), int(r[1])] for r in rows], dtype=np.int64).reshape(-1, 2)
        u = np.array([float(r[2]) for r in rows], dtype=np.float64)
        SparseGraph(n, edges)  # validates simplicity and ranges
        return cls(n=n, edges=edges, u=u, kernel_tag=kernel_tag, seed=seed)


def _edge_uniforms(m: int, rng: np.random.Generator) -> np.ndarray:
    """m uniforms in (0, 1), all distinct; zeros and collisions are redrawn"""
    u = rng.random(m)
    while True:
        bad = u == 0.0
        _, first, counts = np.unique(u, return_index=True, return_counts=True)
        if np.any(counts > 1):
            dup = np.ones(m, dtype=bool)
            dup[first] = False
            bad |= dup
        if not bad.any():
            return u
        logger.warning(f"Regenerating {int(bad.sum())} tied or zero edge uniform(s)")
        u[bad] = rng.random(int(bad.sum()))


def sample_ensemble(seq: WeightSequence, kernel_tag: str, seed: int, replica: int = 0,
                    edge_cap: Optional[float] = DEFAULT_EDGE_CAP) -> PercolationEnsemble:
    """
    Sample each pair {i, j} with probability min(1, w_i w_j / D) and attach uniforms

    Args:
        seq: Weight sequence
        kernel_tag: ``product-full-L`` (D = L_n) or ``product-minus-ell`` (D = ell_n)
        seed: Master seed; the edge set depends on ``(seed, replica)`` only
        replica: Replica index used in the sub-stream keys
        edge_cap: Refuse to sample when the expected edge count exceeds this

    Returns:
        The sampled ensemble
    """
    denominator = kernel_denominator(seq, kernel_tag)
    expected = product_edge_mean(seq.w, 1.0 / denominator)
    if edge_cap is not None and expected > edge_cap:
        raise EdgeBudgetExceeded(
            f"expected edge count {expected:.4g} exceeds the cap {edge_cap:.4g} (n={seq.n})"
        )

    edges = skip_sample(seq.w, 1.0 / denominator, KERNEL_PRODUCT, seed, (replica, STREAM_ENSEMBLE))
    u = _edge_uniforms(edges.shape[0], substream(seed, replica, STREAM_UNIFORMS))
    logger.debug(f"Sampled ensemble n={seq.n} kernel={kernel_tag}: {edges.shape[0]} edges "
                 f"(expected {expected:.1f})")
    return PercolationEnsemble(n=seq.n, edges=edges, u=u, kernel_tag=kernel_tag, seed=seed)
