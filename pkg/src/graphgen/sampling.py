"""
Skip-sampling of rank-1 edge sets over a sorted weight sequence
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..utils.rng import substream

# Source vertices sharing one random sub-stream
BLOCK_SIZE = 4096

KERNEL_PRODUCT = "product"
KERNEL_EXPONENTIAL = "exponential"


def _edge_probability(kind: str) -> Callable[[float], float]:
    if kind == KERNEL_PRODUCT:
        return lambda x: x if x < 1.0 else 1.0
    if kind == KERNEL_EXPONENTIAL:
        return lambda x: -math.expm1(-x)
    raise ValueError(f"unknown kernel kind: {kind}")


def _sample_block(ww: np.ndarray, scale: float, start: int, stop: int,
                  prob: Callable[[float], float], rng: np.random.Generator) -> Tuple[List[int], List[int]]:
    """
    Edges (a, b), a in [start, stop), b > a, with probability prob(scale * ww[a] * ww[b])

    Candidates are proposed with geometric jumps under the nonincreasing bound
    min(1, scale * ww[a] * ww[b]) and thinned to the exact probability.
    """
    k = ww.size
    rows: List[int] = []
    cols: List[int] = []
    weights = ww.tolist()
    random = rng.random

    for a in range(start, stop):
        b = a + 1
        if b >= k:
            break
        wa = weights[a] * scale
        p = min(1.0, wa * weights[b])
        while b < k and p > 0.0:
            if p < 1.0:
                # Geometric jump to the next candidate
                b += int(math.log(1.0 - random()) / math.log1p(-p))
                if b >= k:
                    break
            x = wa * weights[b]
            q = min(1.0, x)
            if random() < prob(x) / p:
                rows.append(a)
                cols.append(b)
            p = q
            b += 1
    return rows, cols


def skip_sample(weights: np.ndarray, scale: float, kind: str, seed: int, key: Tuple[int, ...],
                labels: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Sample independent edges among positions of a nonincreasing weight array

    Each block of ``BLOCK_SIZE`` source positions draws from its own
    sub-stream ``(seed, *key, block)``, so the result depends on the seed only.

    Returns:
        (m, 2) array of vertex labels (``labels[position]``, 1-based positions if omitted)
    """
    ww = np.asarray(weights, dtype=np.float64)
    if ww.size and np.any(np.diff(ww) > 0):
        raise ValueError("skip sampling needs a nonincreasing weight array")
    prob = _edge_probability(kind)

    rows: List[int] = []
    cols: List[int] = []
    for block, start in enumerate(range(0, ww.size, BLOCK_SIZE)):
        rng = substream(seed, *key, block)
        r, c = _sample_block(ww, scale, start, min(start + BLOCK_SIZE, ww.size), prob, rng)
        rows.extend(r)
        cols.extend(c)

    pos = np.column_stack([np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)])
    if labels is None:
        return pos + 1
    return np.asarray(labels, dtype=np.int64)[pos].reshape(-1, 2)


def product_edge_mean(weights: np.ndarray, scale: float) -> float:
    """
    Sum over pairs a < b of min(1, scale * w_a * w_b) in O(k log k)

    The clamped partners of a form a prefix of the sorted array.
    """
    ww = np.asarray(weights, dtype=np.float64)
    k = ww.size
    if k < 2:
        return 0.0
    suffix = np.concatenate([np.cumsum(ww[::-1])[::-1], [0.0]])
    # Number of positions b with scale * w_a * w_b >= 1
    clamp_end = np.searchsorted(-ww, -1.0 / (scale * ww), side="right")
    a = np.arange(k)
    start = np.maximum(a + 1, clamp_end)
    clamped = np.maximum(clamp_end - (a + 1), 0)
    return float(np.sum(clamped) + np.sum(scale * ww * suffix[start]))


def pair_probabilities(rows: np.ndarray, ww: np.ndarray, scale: float, kind: str) -> np.ndarray:
    """Edge probabilities between a block of row weights and all weights"""
    x = scale * np.outer(rows, ww)
    return np.minimum(x, 1.0) if kind == KERNEL_PRODUCT else -np.expm1(-x)


def edge_moments(weights: np.ndarray, scale: float, kind: str, chunk: int = 1024) -> Tuple[float, float]:
    """
    Exact mean and variance of the edge count, summing all pairs in row chunks

    Quadratic in the number of weights; used for oracles and diagnostics.
    """
    ww = np.asarray(weights, dtype=np.float64)
    k = ww.size
    columns = np.arange(k)[None, :]
    mean = 0.0
    var = 0.0
    for start in range(0, k, chunk):
        rows = ww[start:start + chunk]
        probs = pair_probabilities(rows, ww, scale, kind)
        # Pairs a < b only
        upper = columns > np.arange(start, start + rows.size)[:, None]
        probs = np.where(upper, probs, 0.0)
        mean += float(np.sum(probs))
        var += float(np.sum(probs * (1.0 - probs)))
    return mean, var
