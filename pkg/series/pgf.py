"""
Truncated power-series arithmetic for probability generating functions.

Series are stored as coefficient arrays indexed 0..K. Products are Cauchy
products truncated at K; real powers use the classical power recurrence,
which is exact for polynomial bases.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from config import settings
from config.exceptions import (
    InvalidPGFError,
    OrderMismatchError,
    SingularConstantTermError,
)


logger = logging.getLogger(__name__)


def _frozen_array(values, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise ValueError(f"Expected a {ndim}-d coefficient array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError("Series coefficients must be finite")
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients of u^0..u^K of a power series."""
    
    coeffs: np.ndarray
    
    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs, 1))
        if self.coeffs.size == 0:
            raise ValueError("A truncated series needs at least one coefficient")
    
    @property
    def K(self) -> int:
        return self.coeffs.size - 1
    
    @classmethod
    def from_polynomial(cls, coeffs: Sequence[float], K: int) -> "TruncatedSeries":
        """Pad (or cut) polynomial coefficients to a series of order K."""
        padded = np.zeros(K + 1)
        values = np.asarray(coeffs, dtype=float)[: K + 1]
        padded[: values.size] = values
        return cls(padded)
    
    @classmethod
    def one(cls, K: int) -> "TruncatedSeries":
        return cls.from_polynomial([1.0], K)
    
    def evaluate(self, u: float) -> float:
        """Value of the truncated polynomial at u."""
        return float(np.polynomial.polynomial.polyval(u, self.coeffs))
    
    def total(self) -> float:
        return float(self.coeffs.sum())
    
    def __len__(self) -> int:
        return self.coeffs.size


@dataclass(frozen=True)
class BivariateSeries:
    """Coefficients of u^x v^y for 0 <= x, y <= K."""
    
    coeffs: np.ndarray
    
    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs, 2))
        rows, cols = self.coeffs.shape
        if rows != cols or rows == 0:
            raise ValueError(f"Bivariate series must be square, got {self.coeffs.shape}")
    
    @property
    def K(self) -> int:
        return self.coeffs.shape[0] - 1
    
    @classmethod
    def from_polynomial(cls, coeffs, K: int) -> "BivariateSeries":
        """Embed a small coefficient matrix (rows = powers of u) into order K."""
        values = np.atleast_2d(np.asarray(coeffs, dtype=float))
        padded = np.zeros((K + 1, K + 1))
        rows = min(values.shape[0], K + 1)
        cols = min(values.shape[1], K + 1)
        padded[:rows, :cols] = values[:rows, :cols]
        return cls(padded)
    
    def u_axis(self) -> TruncatedSeries:
        """The series at v = 0."""
        return TruncatedSeries(self.coeffs[:, 0])
    
    def total(self) -> float:
        return float(self.coeffs.sum())


@dataclass(frozen=True)
class PMFSequence:
    """Probabilities extracted from a pgf series."""
    
    probs: np.ndarray
    captured_mass: float
    clamped: int = 0
    
    def __len__(self) -> int:
        return self.probs.size


def _truncated_product(a: np.ndarray, b: np.ndarray, K: int) -> np.ndarray:
    return np.convolve(a, b)[: K + 1]


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """
    Cauchy product of two series, truncated at their common order.
    
    Raises:
        OrderMismatchError: If the truncation orders differ
    """
    if a.K != b.K:
        raise OrderMismatchError(f"Cannot multiply series of orders {a.K} and {b.K}")
    return TruncatedSeries(_truncated_product(a.coeffs, b.coeffs, a.K))


def _power_coefficients(base: np.ndarray, exponent: float) -> np.ndarray:
    b0 = base[0]
    if not b0 > 0:
        raise SingularConstantTermError(
            f"Real power needs a positive constant term, got {b0}"
        )
    K = base.size - 1
    out = np.zeros(K + 1)
    out[0] = b0 ** exponent
    support = np.flatnonzero(base[1:]) + 1
    for n in range(1, K + 1):
        k = support[support <= n]
        if k.size == 0:
            continue
        weights = k * exponent - (n - k)
        out[n] = np.dot(weights * base[k], out[n - k]) / (n * b0)
    return out


def series_real_power(base: TruncatedSeries, exponent: float) -> TruncatedSeries:
    """
    Real power of a series via the power recurrence.
    
    c_0 = b_0^e and c_n = (1 / (n b_0)) * sum_{k=1..n} (k e - (n - k)) b_k c_{n-k}.
    
    Args:
        base: Series with positive constant term
        exponent: Any real exponent
        
    Returns:
        Series of base**exponent with the same truncation order
        
    Raises:
        SingularConstantTermError: If base.coeffs[0] <= 0
    """
    return TruncatedSeries(_power_coefficients(base.coeffs, float(exponent)))


def _generalized_binomial(exponent: float, K: int) -> np.ndarray:
    out = np.ones(K + 1)
    for k in range(1, K + 1):
        out[k] = out[k - 1] * (exponent - k + 1) / k
    return out


def _power_by_binomial(base: np.ndarray, exponent: float) -> np.ndarray:
    # base(u, v) = p(u) + q(u) v, so base^e = sum_k C(e, k) q^k p^(e-k) v^k
    K = base.shape[0] - 1
    if np.any(base[:, 2:]):
        raise ValueError("Binomial expansion needs a base of degree <= 1 in v")
    p, q = base[:, 0], base[:, 1]
    binom = _generalized_binomial(exponent, K)
    out = np.zeros((K + 1, K + 1))
    q_power = np.zeros(K + 1)
    q_power[0] = 1.0
    for k in range(K + 1):
        if k > 0:
            q_power = _truncated_product(q_power, q, K)
        if binom[k] == 0.0 or not np.any(q_power):
            continue
        p_power = _power_coefficients(p, exponent - k)
        out[:, k] = binom[k] * _truncated_product(q_power, p_power, K)
    return out


def _power_by_recurrence(base: np.ndarray, exponent: float) -> np.ndarray:
    # Row recurrence from base * dF/du = e * F * dbase/du, solved one power of u at a time
    K = base.shape[0] - 1
    rows = [i for i in range(K + 1) if np.any(base[i])]
    out = np.zeros((K + 1, K + 1))
    out[0] = _power_coefficients(base[0], exponent)
    inverse_row0 = _power_coefficients(base[0], -1.0)
    for x in range(K):
        rhs = np.zeros(K + 1)
        for i in rows:
            if i >= 1 and i <= x + 1:
                rhs += exponent * i * _truncated_product(base[i], out[x + 1 - i], K)
                rhs -= (x + 1 - i) * _truncated_product(base[i], out[x + 1 - i], K)
        out[x + 1] = _truncated_product(rhs, inverse_row0, K) / (x + 1)
    return out


def bivariate_real_power(
    base: BivariateSeries,
    exponent: float,
    method: str = "recurrence"
) -> BivariateSeries:
    """
    Bivariate Taylor expansion of base**exponent.
    
    Args:
        base: Bivariate series with positive constant term
        exponent: Real exponent
        method: "recurrence" (any base) or "binomial" (base of degree <= 1 in v)
        
    Returns:
        BivariateSeries of the same order
    """
    b00 = base.coeffs[0, 0]
    if not b00 > 0:
        raise SingularConstantTermError(
            f"Real power needs a positive constant term, got {b00}"
        )
    if method == "recurrence":
        coeffs = _power_by_recurrence(base.coeffs, float(exponent))
    elif method == "binomial":
        coeffs = _power_by_binomial(base.coeffs, float(exponent))
    else:
        raise ValueError(f"Unknown bivariate power method: {method}")
    return BivariateSeries(coeffs)


def _clamp_coefficients(coeffs: np.ndarray, tol: float) -> PMFSequence:
    worst = coeffs.min()
    if worst < -tol:
        index = np.unravel_index(int(np.argmin(coeffs)), coeffs.shape)
        raise InvalidPGFError(f"Coefficient {tuple(int(i) for i in index)} is {worst:.3e}, not a probability")
    negative = coeffs < 0
    probs = np.where(negative, 0.0, coeffs)
    mass = float(probs.sum())
    if mass > 1.0 + tol:
        raise InvalidPGFError(f"Partial sum {mass!r} exceeds 1")
    if negative.any():
        logger.debug(f"Clamped {int(negative.sum())} negative coefficients to zero")
    probs.setflags(write=False)
    return PMFSequence(probs=probs, captured_mass=mass, clamped=int(negative.sum()))


def pgf_to_pmf(s: TruncatedSeries, clamp_tolerance: Optional[float] = None) -> PMFSequence:
    """
    Read a pmf off the Taylor coefficients of a pgf.
    
    Coefficients in [-tol, 0) are floating-point noise and are clamped to 0.
    
    Raises:
        InvalidPGFError: If a coefficient is below -tol or the partial sum exceeds 1 + tol
    """
    tol = settings.clamp_tolerance if clamp_tolerance is None else clamp_tolerance
    return _clamp_coefficients(s.coeffs, tol)


def bivariate_pgf_to_pmf(s: BivariateSeries, clamp_tolerance: Optional[float] = None) -> PMFSequence:
    """Two-dimensional counterpart of ``pgf_to_pmf``."""
    tol = settings.clamp_tolerance if clamp_tolerance is None else clamp_tolerance
    return _clamp_coefficients(s.coeffs, tol)
