"""
Heavy-tailed weight sequences and the scalars derived from them
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Tuple, Union

import numpy as np
from loguru import logger


class WeightSequenceError(ValueError):
    """Raised when a weight sequence violates its invariants"""


class WeightFileError(WeightSequenceError):
    """Raised when a weight file cannot be parsed"""


def _check_tau(tau: float):
    if not 3.0 < tau < 4.0:
        raise WeightSequenceError(f"tau must lie in (3, 4), got {tau}")


@dataclass(frozen=True)
class ScalingConstants:
    """The exponents alpha, rho and eta of a tail exponent tau"""
    alpha: float
    rho: float
    eta: float

    @classmethod
    def from_tau(cls, tau: float) -> "ScalingConstants":
        _check_tau(tau)
        return cls(
            alpha=1.0 / (tau - 1.0),
            rho=(tau - 2.0) / (tau - 1.0),
            eta=(tau - 3.0) / (tau - 1.0),
        )


@dataclass(frozen=True)
class WeightSequence:
    """
    Vertex weights w_1 >= ... >= w_n > 0 with their tail exponent

    Vertex labels are 1-based: ``w[i - 1]`` is the weight of vertex ``i``.
    """
    w: np.ndarray
    tau: float

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64)
        if w.ndim != 1 or w.size < 2:
            raise WeightSequenceError(f"need at least 2 weights, got {w.size}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise WeightSequenceError("weights must be finite and strictly positive")
        if np.any(np.diff(w) > 0):
            first = int(np.argmax(np.diff(w) > 0)) + 1
            raise WeightSequenceError(f"weights must be nonincreasing (violated at vertex {first + 1})")
        _check_tau(self.tau)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return int(self.w.size)

    @property
    def constants(self) -> ScalingConstants:
        return ScalingConstants.from_tau(self.tau)

    def weight(self, vertex: int) -> float:
        """Weight of a 1-based vertex label"""
        return float(self.w[vertex - 1])

    def weights_of(self, vertices) -> np.ndarray:
        """Weights of an array of 1-based vertex labels"""
        return self.w[np.asarray(vertices, dtype=np.int64) - 1]

    def to_file(self, path: Path):
        """Write one weight per line, 17 significant digits"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            for value in self.w:
                f.write(f"{value:.17g}\n")
        logger.debug(f"Wrote {self.n} weights to {path}")

    @classmethod
    def from_file(cls, path: Path, tau: float) -> "WeightSequence":
        """Read a one-column weight file"""
        path = Path(path)
        if not path.exists():
            raise WeightFileError(f"weight file not found: {path}")

        values = []
        with open(path, "r", encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    values.append(float(line))
                except ValueError:
                    raise WeightFileError(f"{path}:{line_no}: not a number: {line!r}") from None

        try:
            return cls(np.asarray(values), tau)
        except WeightSequenceError as e:
            raise WeightFileError(f"{path}: {e}") from None


@dataclass(frozen=True)
class DerivedStats:
    """Totals and second moments; sigma2 and ell_n leave out vertex 1"""
    L_n: float
    ell_n: float
    sigma2: float
    nu_n: float


@dataclass(frozen=True)
class RescaledView:
    """Rescaled sizes x_i, exponential rates theta_{i,lambda} and p^n_lambda"""
    lam: float
    x: np.ndarray
    theta_lambda: np.ndarray
    p_lambda: float
    p_raw: float
    clamped: bool


@dataclass(frozen=True)
class AssumptionReport:
    """Finite-n check of the supercriticality and power-law assumptions"""
    supercritical: bool
    nu_n: float
    power_law_bounds: bool
    bound_violations: Tuple[int, ...]
    min_weight_condition: bool
    min_weight_threshold: float
    theta_proxies: Tuple[float, ...]
    interval: Tuple[float, float]
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.supercritical and self.power_law_bounds and self.min_weight_condition


def build_power_law(n: int, c: float, tau: float) -> WeightSequence:
    """w_i = c (n / i)^{1 / (tau - 1)}"""
    if n < 2:
        raise WeightSequenceError(f"n must be at least 2, got {n}")
    if c <= 0:
        raise WeightSequenceError(f"c must be positive, got {c}")
    _check_tau(tau)

    i = np.arange(1, n + 1, dtype=np.float64)
    w = c * (n / i) ** (1.0 / (tau - 1.0))
    return WeightSequence(w, tau)


def build_from_cdf(n: int, inverse_tail: Callable[[float], float], tau: float) -> WeightSequence:
    """w_i = [1 - F]^{-1}(i / (n + 1)) for a nonincreasing inverse tail"""
    if n < 2:
        raise WeightSequenceError(f"n must be at least 2, got {n}")

    u = np.arange(1, n + 1, dtype=np.float64) / (n + 1)
    w = np.array([float(inverse_tail(value)) for value in u])
    if np.any(np.diff(w) > 0):
        raise WeightSequenceError("inverse_tail produced a non-monotone sequence")
    return WeightSequence(w, tau)


def build_iid(n: int, sampler: Callable[[np.random.Generator, int], np.ndarray],
              tau: float, rng: np.random.Generator) -> WeightSequence:
    """Sort n i.i.d. draws in decreasing order"""
    draws = np.asarray(sampler(rng, n), dtype=np.float64)
    return WeightSequence(np.sort(draws)[::-1], tau)


def derived_stats(seq: WeightSequence, lam: float = 0.0) -> Tuple[DerivedStats, RescaledView, ScalingConstants]:
    """
    Compute L_n, ell_n, sigma2, nu_n, the rescaled view at ``lam`` and the constants

    Sums use numpy's pairwise summation.
    """
    if lam < 0:
        raise WeightSequenceError(f"lambda must be nonnegative, got {lam}")

    n = seq.n
    consts = seq.constants
    w = seq.w

    L_n = float(np.sum(w))
    ell_n = float(np.sum(w[1:]))
    sigma2 = float(np.sum(w[1:] ** 2)) / n
    nu_n = n * sigma2 / ell_n
    derived = DerivedStats(L_n=L_n, ell_n=ell_n, sigma2=sigma2, nu_n=nu_n)

    x = w / (n ** consts.rho * math.sqrt(sigma2))
    theta = (lam + n ** consts.eta) * x
    p_raw = (1.0 + lam * n ** (-consts.eta)) / nu_n
    clamped = p_raw > 1.0
    if clamped:
        logger.warning(f"p^n_lambda = {p_raw:.6g} exceeds 1 at lambda={lam}; clamped to 1")
    view = RescaledView(
        lam=float(lam),
        x=x,
        theta_lambda=theta,
        p_lambda=min(p_raw, 1.0),
        p_raw=p_raw,
        clamped=clamped,
    )
    return derived, view, consts


def p_lambda(seq: WeightSequence, lam: float) -> float:
    """Unclamped p^n_lambda = (1 + lambda n^{-eta}) / nu_n"""
    derived, _, consts = derived_stats(seq, 0.0)
    return (1.0 + lam * seq.n ** (-consts.eta)) / derived.nu_n


def lambda_for_p(seq: WeightSequence, p: float) -> float:
    """Inverse of ``p_lambda``: the lambda at which p^n_lambda equals p"""
    derived, _, consts = derived_stats(seq, 0.0)
    return (p * derived.nu_n - 1.0) * seq.n ** consts.eta


def check_assumptions(seq: WeightSequence, A1: float, A2: float) -> AssumptionReport:
    """Report which finite-n conditions of the weight assumptions hold"""
    if not 0 < A1 <= A2:
        raise WeightSequenceError(f"need 0 < A1 <= A2, got A1={A1}, A2={A2}")

    n = seq.n
    derived, view, consts = derived_stats(seq, 0.0)

    half = n // 2
    i = np.arange(1, half + 1, dtype=np.float64)
    envelope = (n / i) ** consts.alpha
    w_head = seq.w[:half]
    # Equality cases are accepted up to rounding
    low_ok = w_head >= A1 * envelope * (1.0 - 1e-12)
    high_ok = w_head <= A2 * envelope * (1.0 + 1e-12)
    violations = tuple(int(k) + 1 for k in np.flatnonzero(~(low_ok & high_ok)))

    threshold = A1 * math.log(n) ** 1.5 * n ** (-consts.eta / 4.0)
    proxies = tuple(float(v) for v in n ** consts.eta * view.x[:10])

    root_sigma = math.sqrt(derived.sigma2)
    interval = (
        2.0 * root_sigma / A1,
        n ** consts.alpha * root_sigma / (A2 * 2.0 ** (consts.alpha + 1.0)),
    )

    report = AssumptionReport(
        supercritical=derived.nu_n > 1.0,
        nu_n=derived.nu_n,
        power_law_bounds=not violations,
        bound_violations=violations,
        min_weight_condition=bool(seq.w[-1] >= threshold),
        min_weight_threshold=threshold,
        theta_proxies=proxies,
        interval=interval,
        details={"A1": A1, "A2": A2, "w_n": float(seq.w[-1])},
    )
    logger.debug(f"Assumption check n={n}: nu_n={derived.nu_n:.4f}, bounds={report.power_law_bounds}, "
                 f"min-weight={report.min_weight_condition}")
    return report


def as_weight_array(weights: Union[WeightSequence, np.ndarray, list, tuple]) -> np.ndarray:
    """Raw weight array of a sequence or of any array-like of vertex weights"""
    if isinstance(weights, WeightSequence):
        return weights.w
    arr = np.asarray(weights, dtype=np.float64)
    if arr.ndim != 1 or np.any(arr < 0):
        raise WeightSequenceError("vertex weights must be a 1-d array of nonnegative reals")
    return arr
