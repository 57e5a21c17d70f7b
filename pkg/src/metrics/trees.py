"""
Hop-metric statistics of trees: diameter, pair distances, nested Hausdorff distance, covering numbers
"""

import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np
from loguru import logger

from ..mst import TreeStructure
from ..utils.stats import loglog_fit

# Scales dropped at each end of a dimension fit
DEFAULT_TRIM = 2


def _bfs_distances(adjacency: Dict[int, list], sources: Iterable[int]) -> Dict[int, int]:
    dist = {s: 0 for s in sources}
    queue = deque(dist)
    while queue:
        v = queue.popleft()
        d = dist[v] + 1
        for u in adjacency[v]:
            if u not in dist:
                dist[u] = d
                queue.append(u)
    return dist


def _farthest(adjacency: Dict[int, list], source: int) -> Tuple[int, int]:
    dist = _bfs_distances(adjacency, [source])
    vertex = max(dist, key=lambda v: (dist[v], -v))
    return vertex, dist[vertex]


def tree_diameter(t: TreeStructure) -> int:
    """Exact hop diameter by two breadth-first sweeps"""
    end, _ = _farthest(t.adjacency, t.root)
    _, diameter = _farthest(t.adjacency, end)
    return diameter


def typical_distance(t: TreeStructure, pairs: int, rng: np.random.Generator) -> np.ndarray:
    """
    Hop distances between ``pairs`` uniformly chosen vertex pairs

    Pairs are drawn with replacement; a pair with identical endpoints is redrawn.
    """
    if t.size < 2:
        raise ValueError("typical distance needs a tree with at least two vertices")
    vertices = t.vertices
    out = np.empty(pairs, dtype=np.int64)
    for k in range(pairs):
        i = j = 0
        while i == j:
            i, j = rng.integers(len(vertices), size=2)
        out[k] = t.distance(vertices[i], vertices[j])
    return out


def hausdorff_nested(M: TreeStructure, sub_vertices: Iterable[int]) -> int:
    """Largest hop distance from a vertex of M to the vertex set ``sub_vertices``"""
    sources = [int(v) for v in sub_vertices]
    if not sources:
        raise ValueError("sub_vertices must be nonempty")
    missing = set(sources).difference(M.vertices)
    if missing:
        raise ValueError(f"{len(missing)} vertices of the subtree are not in M")
    dist = _bfs_distances(M.adjacency, sources)
    return max(dist.values())


def covering_number(t: TreeStructure, radius: float) -> int:
    """
    Minimum number of closed hop balls of the given radius covering the tree

    A real radius is floored. The deepest uncovered vertex is covered by a
    ball centred at its ancestor ``radius`` levels up (or the root), which is
    optimal on trees.
    """
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    r = int(math.floor(radius))
    if r == 0:
        return t.size

    depth = t.depth
    adjacency = t.adjacency
    covered = set()
    count = 0
    for v in sorted(t.vertices, key=lambda x: (-depth[x], x)):
        if v in covered:
            continue
        center = v
        for _ in range(r):
            if center == t.root:
                break
            center = t.parent[center]
        ball = {center: 0}
        queue = deque([center])
        while queue:
            x = queue.popleft()
            if ball[x] == r:
                continue
            for y in adjacency[x]:
                if y not in ball:
                    ball[y] = ball[x] + 1
                    queue.append(y)
        covered.update(ball)
        count += 1
    return count


def ball_scale(r: int) -> int:
    """Vertex span 2r + 1 of a radius-r hop ball"""
    return 2 * r + 1


@dataclass(frozen=True)
class CoveringReport:
    """Covering counts over a radius grid and the log-log dimension fit"""
    radii: Tuple[int, ...]
    counts: Tuple[int, ...]
    slope: float
    intercept: float
    r_squared: float
    window: Tuple[int, int]
    degenerate: bool
    message: str = ""


def dim_estimate(t: TreeStructure, radii: Sequence[float], trim: int = DEFAULT_TRIM) -> CoveringReport:
    """
    Slope of log N(r) against log(1 / (2r + 1)) over the grid with ``trim`` scales dropped per end

    A hop ball of radius r spans at most 2r + 1 vertices of any geodesic, so
    2r + 1 is its scale; a path of m vertices needs ceil(m / (2r + 1)) balls.
    The grid needs at least four positive radii spanning a decade. Fits with
    fewer than three usable scales are returned flagged as degenerate.
    """
    grid = sorted(set(int(math.floor(r)) for r in radii))
    if len(grid) < 4 or grid[0] < 1:
        raise ValueError(f"need at least 4 distinct positive hop radii, got {grid}")
    if grid[-1] < 10 * grid[0]:
        raise ValueError(f"radius grid must span a decade, got {grid[0]}..{grid[-1]}")

    counts = [covering_number(t, r) for r in grid]
    lo, hi = trim, len(grid) - trim
    window = (grid[lo], grid[hi - 1]) if hi > lo else (grid[0], grid[-1])
    x = [1.0 / ball_scale(r) for r in grid[lo:hi]]
    y = counts[lo:hi]

    try:
        fit = loglog_fit(x, y)
    except ValueError as e:
        logger.warning(f"Degenerate covering fit on {t.size} vertices: {e}")
        return CoveringReport(radii=tuple(grid), counts=tuple(counts), slope=float("nan"),
                              intercept=float("nan"), r_squared=float("nan"), window=window,
                              degenerate=True, message=str(e))
    return CoveringReport(radii=tuple(grid), counts=tuple(counts), slope=fit.slope, intercept=fit.intercept,
                          r_squared=fit.r_squared, window=window, degenerate=False)
