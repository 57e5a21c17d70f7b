"""
The drift functions Phi and phi of the exploration walk and the positive root of Phi
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.optimize import bisect

from ..utils.stats import FitResult, loglog_fit
from ..weights import WeightSequence, check_assumptions, derived_stats

# Below this argument s + expm1(-s) is evaluated by its Taylor series
SERIES_CUTOFF = 1e-3
MAX_DOUBLINGS = 400


class RootBracketError(ValueError):
    """Raised when no sign change of Phi can be bracketed"""


def _g(s: np.ndarray) -> np.ndarray:
    """s + e^{-s} - 1, accurate for small s"""
    s = np.asarray(s, dtype=np.float64)
    small = s < SERIES_CUTOFF
    out = s + np.expm1(-s)
    t = s[small]
    out[small] = t * t * (0.5 - t * (1.0 / 6.0 - t * (1.0 / 24.0 - t / 120.0)))
    return out


def _rates(seq: WeightSequence, lam: float) -> Tuple[np.ndarray, float]:
    _, view, consts = derived_stats(seq, lam)
    return view.theta_lambda[1:], 1.0 + lam * seq.n ** (-consts.eta)


def phi_varphi(seq: WeightSequence, lam: float, u):
    """
    Phi(u) = lambda u - sum_{j>=2} theta_j / (1 + lambda n^{-eta}) * g(u theta_j)
    and phi(u) = sum_{j>=2} theta_j^2 g(u theta_j) / (u theta_j), with g(s) = s + e^{-s} - 1

    Both vanish at u = 0. Scalars in, scalars out; arrays are evaluated elementwise.
    """
    theta, scale = _rates(seq, lam)
    u_arr = np.atleast_1d(np.asarray(u, dtype=np.float64))
    if np.any(u_arr < 0):
        raise ValueError("u must be nonnegative")

    Phi = np.empty_like(u_arr)
    phi = np.empty_like(u_arr)
    for k, value in enumerate(u_arr):
        if value == 0.0:
            Phi[k] = phi[k] = 0.0
            continue
        s = value * theta
        g = _g(s)
        Phi[k] = lam * value - float(np.sum(theta * g)) / scale
        phi[k] = float(np.sum(theta * theta * g / s))

    if np.ndim(u) == 0:
        return float(Phi[0]), float(phi[0])
    return Phi, phi


def root_s(seq: WeightSequence, lam: float, rtol: float = 1e-12) -> float:
    """
    The unique positive zero s^(n)(lambda) of Phi

    Phi is strictly concave with Phi(0) = 0 and Phi'(0) = lambda > 0, so a
    bracket [u, 2u] with Phi(u) > 0 > Phi(2u) is found by halving or doubling
    from u = 1 and refined by bisection.
    """
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")

    def Phi(u: float) -> float:
        return phi_varphi(seq, lam, u)[0]

    u = 1.0
    value = Phi(u)
    for _ in range(MAX_DOUBLINGS):
        if value > 0.0:
            if Phi(2.0 * u) < 0.0:
                break
            u *= 2.0
            value = Phi(u)
        else:
            u *= 0.5
            value = Phi(u)
    else:
        raise RootBracketError(
            f"could not bracket the zero of Phi for lambda={lam}, n={seq.n}: last u={u:.3g}, Phi(u)={value:.3g}"
        )

    root = bisect(Phi, u, 2.0 * u, xtol=1e-300, rtol=rtol, maxiter=2000)
    logger.debug(f"s^(n)({lam}) = {root:.12g} for n={seq.n}")
    return float(root)


@dataclass(frozen=True)
class DriftSweep:
    """u phi(u) / u^{tau - 2} over a log-spaced grid of the interval from the weight assumptions"""
    u: np.ndarray
    ratio: np.ndarray
    interval: Tuple[float, float]

    @property
    def spread(self) -> float:
        """max / min of the ratio; bounded when u phi(u) grows like u^{tau - 2}"""
        return float(self.ratio.max() / self.ratio.min())


def drift_sweep(seq: WeightSequence, lam: float, A1: float, A2: float, points: int = 25) -> DriftSweep:
    """Evaluate u phi(u) / u^{tau - 2} across the interval reported by ``check_assumptions``"""
    interval = check_assumptions(seq, A1, A2).interval
    lo, hi = interval
    if not 0 < lo < hi:
        raise ValueError(f"empty sweep interval [{lo:.4g}, {hi:.4g}] for A1={A1}, A2={A2}")
    u = np.geomspace(lo, hi, points)
    _, phi = phi_varphi(seq, lam, u)
    return DriftSweep(u=u, ratio=u * phi / u ** (seq.tau - 2.0), interval=interval)


@dataclass(frozen=True)
class RootScaling:
    """
    Roots s^(n)(lambda) over a lambda grid, their Phi residuals and log-log fits

    Phi_lambda(u) depends on lambda only through mu = lambda / kappa and
    y = kappa u with kappa = 1 + lambda n^{-eta}, so the reduced roots
    y(mu) = kappa s(lambda) carry the lambda^{1/(tau - 3)} growth without the
    finite-n factor kappa.
    """
    lambdas: Tuple[float, ...]
    roots: Tuple[float, ...]
    residuals: Tuple[float, ...]
    mu: Tuple[float, ...]
    reduced: Tuple[float, ...]
    fit: FitResult
    reduced_fit: FitResult

    @property
    def max_residual(self) -> float:
        """Largest |Phi(s)| / (lambda s) over the grid"""
        return max(self.residuals)

    def reduced_spread(self, exponent: float) -> float:
        """max / min of y / mu^exponent; bounded when y grows like mu^exponent"""
        ratio = np.asarray(self.reduced) / np.asarray(self.mu) ** exponent
        return float(ratio.max() / ratio.min())


def root_scaling(seq: WeightSequence, lambdas: Sequence[float], rtol: float = 1e-12) -> RootScaling:
    """Solve Phi = 0 at each lambda and fit log s against log lambda, raw and reduced"""
    if len(lambdas) < 3:
        raise ValueError(f"need at least 3 lambda values, got {len(lambdas)}")
    eta = seq.constants.eta
    roots, residuals, mu, reduced = [], [], [], []
    for lam in lambdas:
        s = root_s(seq, lam, rtol=rtol)
        kappa = 1.0 + lam * seq.n ** (-eta)
        roots.append(s)
        residuals.append(abs(phi_varphi(seq, lam, s)[0]) / (lam * s))
        mu.append(lam / kappa)
        reduced.append(kappa * s)
    return RootScaling(
        lambdas=tuple(float(lam) for lam in lambdas),
        roots=tuple(roots),
        residuals=tuple(residuals),
        mu=tuple(mu),
        reduced=tuple(reduced),
        fit=loglog_fit(lambdas, roots),
        reduced_fit=loglog_fit(mu, reduced),
    )
