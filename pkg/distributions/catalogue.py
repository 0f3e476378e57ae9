"""
Closed-form pmfs, pgf series and moments of the catalogue laws.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import betaln, gammaln

from config import settings
from config.exceptions import MomentDivergenceError, ParameterDomainError
from series import TruncatedSeries, series_mul, series_real_power
from .models import (
    Bernoulli,
    BetaNB,
    Degenerate,
    Geometric,
    NegBinomial,
    Poisson,
    ThetaRatio,
)


def as_negbinomial(d) -> Optional[NegBinomial]:
    """NegBinomial view of an NB or geometric law, None for other laws."""
    if isinstance(d, NegBinomial):
        return d
    if isinstance(d, Geometric):
        return NegBinomial(r=1.0, p=d.p)
    return None


def log_nb_coefficient(k, r):
    """log C(k + r - 1, k) for real r > 0."""
    k = np.asarray(k, dtype=float)
    return gammaln(k + r) - gammaln(r) - gammaln(k + 1)


def pmf_vector(d, K: int) -> np.ndarray:
    """Closed-form pmf at 0..K."""
    k = np.arange(K + 1, dtype=float)
    nb = as_negbinomial(d)
    if isinstance(d, Poisson):
        return np.exp(k * math.log(d.lam) - d.lam - gammaln(k + 1))
    if nb is not None:
        return np.exp(log_nb_coefficient(k, nb.r) + nb.r * math.log(nb.p) + k * math.log1p(-nb.p))
    if isinstance(d, Bernoulli):
        out = np.zeros(K + 1)
        out[0] = 1.0 - d.p
        if K >= 1:
            out[1] = d.p
        return out
    if isinstance(d, ThetaRatio):
        # (1 + t2) g(k) - t2 g(k - 1) with g the geometric pmf of the denominator
        ratio = d.theta_den / (1.0 + d.theta_den)
        g = np.exp(k * math.log(ratio)) / (1.0 + d.theta_den)
        shifted = np.concatenate(([0.0], g[:-1]))
        return np.clip((1.0 + d.theta_num) * g - d.theta_num * shifted, 0.0, None)
    if isinstance(d, BetaNB):
        return np.exp(
            log_nb_coefficient(k, d.r)
            + betaln(d.alpha1 + d.r, d.alpha2 + k)
            - betaln(d.alpha1, d.alpha2)
        )
    if isinstance(d, Degenerate):
        out = np.zeros(K + 1)
        if d.k <= K:
            out[d.k] = 1.0
        return out
    raise ParameterDomainError(f"Unsupported law {d!r}")


def pmf_eval(d, k: int) -> float:
    """
    Exact pmf of a catalogue law at k.
    
    Args:
        d: Catalogue law
        k: Count value (negative values have probability 0)
        
    Returns:
        P(X = k)
    """
    if k < 0:
        return 0.0
    return float(pmf_vector(d, int(k))[int(k)])


def _geometric_series(theta: float, K: int) -> TruncatedSeries:
    # 1 / (1 + theta (1 - u))
    return series_real_power(TruncatedSeries.from_polynomial([1.0 + theta, -theta], K), -1.0)


def pgf_series_of(d, K: int) -> TruncatedSeries:
    """
    Taylor coefficients of the pgf at 0 up to order K.
    
    The coefficients are produced by series arithmetic on the closed-form
    pgf (hypergeometric term ratio for the beta-NB law), not by the pmf.
    """
    nb = as_negbinomial(d)
    if isinstance(d, Poisson):
        coeffs = np.empty(K + 1)
        coeffs[0] = math.exp(-d.lam)
        for n in range(1, K + 1):
            coeffs[n] = coeffs[n - 1] * d.lam / n
        return TruncatedSeries(coeffs)
    if nb is not None:
        # (p / (1 - (1 - p) u))^r
        base = TruncatedSeries.from_polynomial([1.0, -(1.0 - nb.p)], K)
        powered = series_real_power(base, -nb.r)
        return TruncatedSeries(powered.coeffs * nb.p ** nb.r)
    if isinstance(d, Bernoulli):
        return TruncatedSeries.from_polynomial([1.0 - d.p, d.p], K)
    if isinstance(d, ThetaRatio):
        numerator = TruncatedSeries.from_polynomial([1.0 + d.theta_num, -d.theta_num], K)
        return series_mul(numerator, _geometric_series(d.theta_den, K))
    if isinstance(d, BetaNB):
        coeffs = np.empty(K + 1)
        coeffs[0] = math.exp(betaln(d.alpha1 + d.r, d.alpha2) - betaln(d.alpha1, d.alpha2))
        total = d.alpha1 + d.r + d.alpha2
        for n in range(K):
            coeffs[n + 1] = coeffs[n] * (n + d.r) * (d.alpha2 + n) / ((n + 1) * (total + n))
        return TruncatedSeries(coeffs)
    if isinstance(d, Degenerate):
        coeffs = np.zeros(K + 1)
        if d.k <= K:
            coeffs[d.k] = 1.0
        return TruncatedSeries(coeffs)
    raise ParameterDomainError(f"Unsupported law {d!r}")


def mean_of(d) -> float:
    """
    Closed-form mean.
    
    Raises:
        MomentDivergenceError: For a beta-NB law with alpha1 <= 1
    """
    nb = as_negbinomial(d)
    if isinstance(d, Poisson):
        return d.lam
    if nb is not None:
        return nb.r * (1.0 - nb.p) / nb.p
    if isinstance(d, Bernoulli):
        return d.p
    if isinstance(d, ThetaRatio):
        return d.theta_den - d.theta_num
    if isinstance(d, BetaNB):
        if d.alpha1 <= 1.0:
            raise MomentDivergenceError(f"Beta-NB mean needs alpha1 > 1, got {d.alpha1}")
        return d.r * d.alpha2 / (d.alpha1 - 1.0)
    if isinstance(d, Degenerate):
        return float(d.k)
    raise ParameterDomainError(f"Unsupported law {d!r}")


def variance_of(d) -> float:
    """Closed-form variance."""
    nb = as_negbinomial(d)
    if isinstance(d, Poisson):
        return d.lam
    if nb is not None:
        return nb.r * (1.0 - nb.p) / nb.p ** 2
    if isinstance(d, Bernoulli):
        return d.p * (1.0 - d.p)
    if isinstance(d, ThetaRatio):
        # second factorial moment from the pgf: 2 t1 (t1 - t2)
        mean = d.theta_den - d.theta_num
        return 2.0 * d.theta_den * mean + mean - mean ** 2
    if isinstance(d, BetaNB):
        if d.alpha1 <= 2.0:
            raise MomentDivergenceError(f"Beta-NB variance needs alpha1 > 2, got {d.alpha1}")
        a1, a2, r = d.alpha1, d.alpha2, d.r
        return r * a2 * (r + a1 - 1.0) * (a2 + a1 - 1.0) / ((a1 - 2.0) * (a1 - 1.0) ** 2)
    if isinstance(d, Degenerate):
        return 0.0
    raise ParameterDomainError(f"Unsupported law {d!r}")


def support_bound(mean: float, stddev: float, spread: float = 12.0) -> int:
    """ceil(mean + spread * stddev), at least 1."""
    return max(1, int(math.ceil(mean + spread * stddev)))


def natural_bound(d, tail: float = 1e-8, ceiling: int = 100_000) -> int:
    """
    Truncation order that captures all but ``tail`` of the mass of d.

    Starts from mean + 12 sd and doubles while the captured mass falls short.
    """
    if isinstance(d, Degenerate):
        return max(1, d.k)
    if isinstance(d, Bernoulli):
        return 1
    try:
        K = support_bound(mean_of(d), math.sqrt(variance_of(d)))
    except MomentDivergenceError:
        return settings.truncation_order
    while K < ceiling and pmf_vector(d, K).sum() < 1.0 - tail:
        K *= 2
    return min(K, ceiling)


@dataclass(frozen=True)
class ThetaRatioComponents:
    """Decomposition of a ThetaRatio law into elementary pieces."""
    
    kind: str  # "geometric", "zero_inflated", or "bernoulli_convolution"
    weight: float  # geometric weight, or the Bernoulli probability
    geometric_p: float


def theta_ratio_components(d: ThetaRatio) -> ThetaRatioComponents:
    """
    Split a ThetaRatio law.
    
    theta_num > 0: mixture (1 - w) delta_0 + w Geometric, w = 1 - theta_num / theta_den.
    theta_num < 0: Bernoulli(-theta_num) + Geometric.
    """
    geometric_p = 1.0 / (1.0 + d.theta_den)
    if d.theta_num == 0.0:
        return ThetaRatioComponents("geometric", 1.0, geometric_p)
    if d.theta_num > 0.0:
        return ThetaRatioComponents("zero_inflated", 1.0 - d.theta_num / d.theta_den, geometric_p)
    return ThetaRatioComponents("bernoulli_convolution", -d.theta_num, geometric_p)
