"""
Statistical helpers shared by the samplers, the experiments and the validation suite
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class FitResult:
    """Least-squares line through (log x, log y)"""
    slope: float
    intercept: float
    r_squared: float
    stderr: float
    ci_low: float
    ci_high: float
    points: int


def empirical_law(samples: Iterable[Hashable]) -> Dict[Hashable, float]:
    """Normalized frequency table of hashable outcomes"""
    counts = Counter(samples)
    total = sum(counts.values())
    if total == 0:
        return {}
    return {key: value / total for key, value in counts.items()}


def tv_distance(p: Mapping[Hashable, float], q: Mapping[Hashable, float]) -> float:
    """Total-variation distance between two laws on a countable space"""
    support = set(p) | set(q)
    return 0.5 * sum(abs(p.get(key, 0.0) - q.get(key, 0.0)) for key in support)


def mc_standard_error(probability: float, trials: int) -> float:
    """Standard error of a Bernoulli frequency"""
    if trials <= 0:
        return float("inf")
    return float(np.sqrt(max(probability * (1.0 - probability), 0.0) / trials))


def loglog_fit(x: Sequence[float], y: Sequence[float], confidence: float = 0.95) -> FitResult:
    """
    Fit log y = slope * log x + intercept

    Non-positive pairs are dropped; at least three points must remain.
    """
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    keep = (x_arr > 0) & (y_arr > 0) & np.isfinite(x_arr) & np.isfinite(y_arr)
    if keep.sum() < 3:
        raise ValueError(f"need at least 3 positive points for a log-log fit, got {int(keep.sum())}")

    result = stats.linregress(np.log(x_arr[keep]), np.log(y_arr[keep]))
    points = int(keep.sum())
    half_width = stats.t.ppf(0.5 + confidence / 2.0, points - 2) * result.stderr
    return FitResult(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=float(result.rvalue ** 2),
        stderr=float(result.stderr),
        ci_low=float(result.slope - half_width),
        ci_high=float(result.slope + half_width),
        points=points,
    )
