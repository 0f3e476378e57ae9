"""
Necessary conditions, the ThetaRatio/NB coverage map, and support bounds for
linear conditional expectations.
"""

from itertools import combinations
from typing import Dict, Optional
import logging
import math

import numpy as np

from config import settings
from config.exceptions import CorrelationBoundError, OutOfTheoremScopeError, ParameterDomainError
from families import ThetaFamilyParams
from .models import ConditionReport, LinearCESpec, ThetaDomainReport


logger = logging.getLogger(__name__)

OUTSIDE = "outside"


def principal_minors(matrix: np.ndarray, min_size: int = 2) -> Dict[tuple, float]:
    """All principal minors of size >= min_size, keyed by index subset."""
    n = matrix.shape[0]
    minors = {}
    for size in range(min_size, n + 1):
        for subset in combinations(range(n), size):
            minors[subset] = float(np.linalg.det(matrix[np.ix_(subset, subset)]))
    return minors


def necessary_conditions(spec: LinearCESpec, tolerance: Optional[float] = None) -> ConditionReport:
    """
    Moment-based necessary conditions.

    n = 2 classifies the slope product ac (covariance identities force
    ac = Corr(X, Y)^2): "independent" (a = c = 0), "correlated" (0 < ac < 1),
    "linear_dependence" (ac = 1), otherwise violated. For every n the
    principal minors of I - A are reported; all must be positive.
    """
    tol = settings.parameter_tolerance if tolerance is None else tolerance
    minors = principal_minors(np.eye(spec.n) - spec.matrix)
    positive = all(value > 0 for value in minors.values())
    if spec.n > 2:
        return ConditionReport(
            n=spec.n,
            case="minors_positive" if positive else "minors_violated",
            satisfied=positive,
            minors=minors,
        )
    a, _, c, _ = spec.coefficients()
    product = a * c
    if abs(a) <= tol and abs(c) <= tol:
        case, ok = "independent", True
    elif abs(a) <= tol or abs(c) <= tol:
        case, ok = "one_sided_zero_slope", False
    elif product < 0:
        case, ok = "slope_signs_differ", False
    elif abs(product - 1.0) <= tol:
        case, ok = "linear_dependence", True
    elif product < 1.0:
        case, ok = "correlated", True
    else:
        case, ok = "no_positive_variance_solution", False
    logger.debug(f"Necessary conditions: {case} (ac={product:g})")
    return ConditionReport(n=2, case=case, satisfied=ok, product=product, minors=minors)


def _theta_params(a: float, b: float, c: float, d: float, delta: float) -> ThetaFamilyParams:
    return ThetaFamilyParams(
        delta=delta,
        theta1=d / delta,
        theta2=d / delta - c,
        theta3=b / delta,
        theta4=b / delta - a,
    )


def classify_theta_domain(
    a: float,
    b: float,
    c: float,
    d: float,
    tolerance: Optional[float] = None
) -> ThetaDomainReport:
    """
    Locate (a, b, c, d) among the regions reachable by the ThetaRatio/NB family.

    Regions, with r = b/d:
      a: a >= 1 > c and r > sqrt(a/c)
      b: c >= 1 > a and r < sqrt(a/c)
      c: a = c < 1 and b = d (Poisson-gamma limit)
      d: c < a < 1 and sqrt(a/c) < r < a(1-c) / (c(1-a))
      e: a < c < 1 and a(1-c) / (c(1-a)) < r < sqrt(a/c)
    Inside a region, delta = (b^2 c - a d^2) / (a d (1-c) + b c (a-1)),
    theta1 = d/delta, theta2 = theta1 - c, theta3 = b/delta, theta4 = theta3 - a.

    Raises:
        ParameterDomainError: If a slope or intercept is not positive
        CorrelationBoundError: If ac >= 1
    """
    if min(a, b, c, d) <= 0:
        raise ParameterDomainError(f"Slopes and intercepts must be positive, got {(a, b, c, d)}")
    if a * c >= 1.0:
        raise CorrelationBoundError(f"Slope product ac={a * c:g} must be below 1")
    tol = settings.parameter_tolerance if tolerance is None else tolerance
    ratio = b / d
    balance = math.sqrt(a / c)
    if abs(a - c) <= tol * max(1.0, a):
        if abs(b - d) <= tol * max(1.0, b):
            delta = d / c
            params = ThetaFamilyParams(delta=delta, theta1=c, theta2=0.0, theta3=a, theta4=0.0)
            return ThetaDomainReport(region="c", params=params, delta=delta)
        return ThetaDomainReport(region=OUTSIDE)
    region = OUTSIDE
    if a >= 1.0 > c and ratio > balance:
        region = "a"
    elif c >= 1.0 > a and ratio < balance:
        region = "b"
    elif a < 1.0 and c < 1.0:
        upper = a * (1.0 - c) / (c * (1.0 - a))
        if c < a and balance < ratio < upper:
            region = "d"
        elif a < c and upper < ratio < balance:
            region = "e"
    if region == OUTSIDE:
        return ThetaDomainReport(region=OUTSIDE)
    delta = (b * b * c - a * d * d) / (a * d * (1.0 - c) + b * c * (a - 1.0))
    params = _theta_params(a, b, c, d, delta)
    logger.debug(f"Region {region}: delta={delta:g}")
    return ThetaDomainReport(region=region, params=params, delta=delta)


def choose_support_bound(a: float, b: float, c: float, d: float) -> int:
    """
    Smallest perfect square N > 4 with 1/sqrt(N) < min(a, c),
    max(a, c) < 1 - 1/sqrt(N) and max(b, d) < sqrt(N).

    Raises:
        OutOfTheoremScopeError: If a or c is outside (0, 1)
    """
    if not (0 < a < 1 and 0 < c < 1):
        raise OutOfTheoremScopeError(f"Slopes must lie in (0, 1), got a={a}, c={c}")
    if min(b, d) <= 0:
        raise ParameterDomainError(f"Intercepts must be positive, got b={b}, d={d}")
    low, high, top = min(a, c), max(a, c), max(b, d)
    root = 3
    while not (1.0 / root < low and high < 1.0 - 1.0 / root and top < root):
        root += 1
    return root * root


def coefficient_relations(
    a: float,
    b: float,
    c: float,
    d: float,
    tolerance: float = 1e-9
) -> Dict[str, bool]:
    """
    Which constructive families can carry E[X|Y] = cY + d, E[Y|X] = aX + b.

    Poisson-gamma and beta-NB need a/b = c/d; the trivariate NB reduction
    needs b/d = a(1-c) / (c(1-a)); the ThetaRatio/NB family needs a region.
    """
    relations = {
        "poisson_gamma": abs(a * d - b * c) <= tolerance * max(1.0, abs(a * d)),
        "beta_nb": abs(a * d - b * c) <= tolerance * max(1.0, abs(a * d)),
        "trivariate_nb": False,
        "theta_family": False,
    }
    if 0 < a < 1 and 0 < c < 1 and d > 0:
        target = a * (1.0 - c) / (c * (1.0 - a))
        relations["trivariate_nb"] = abs(b / d - target) <= tolerance * max(1.0, target)
    if min(a, b, c, d) > 0 and a * c < 1.0:
        relations["theta_family"] = classify_theta_domain(a, b, c, d).inside
    return relations
