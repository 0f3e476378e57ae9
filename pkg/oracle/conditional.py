"""
Conditional pmfs, conditional expectations and affine diagnostics computed
directly from a joint probability tensor.
"""

from pathlib import Path
from typing import Optional, Sequence, Tuple, Union
import logging

import numpy as np

from config import settings
from config.exceptions import ConditioningOnNullSetError, ParameterDomainError, UnderdeterminedFitError
from families import JointPMF
from .models import AffineFitReport, CETable


logger = logging.getLogger(__name__)

# Slices lighter than this cannot be conditioned on
NULL_SET_MASS = 1e-13


def _check_target(j: JointPMF, target: int) -> Tuple[int, ...]:
    if not 0 <= target < j.n:
        raise ParameterDomainError(f"Target {target} outside 0..{j.n - 1}")
    return tuple(axis for axis in range(j.n) if axis != target)


def conditional_pmf(j: JointPMF, target: int, given: Sequence[int]) -> np.ndarray:
    """
    Law of X_target given the other coordinates.

    Args:
        j: Joint pmf
        target: Coordinate whose law is returned
        given: Values of the remaining coordinates, in increasing axis order

    Returns:
        Normalized probabilities on 0..N

    Raises:
        ConditioningOnNullSetError: If the slice mass is at most 1e-13
    """
    rest = _check_target(j, target)
    given = tuple(int(v) for v in given)
    if len(given) != len(rest):
        raise ParameterDomainError(f"Expected {len(rest)} conditioning values, got {len(given)}")
    if any(v < 0 or v > j.N for v in given):
        raise ConditioningOnNullSetError(f"Configuration {given} lies outside {{0..{j.N}}}")
    index = [slice(None)] * j.n
    for axis, value in zip(rest, given):
        index[axis] = value
    slice_ = j.probs[tuple(index)]
    mass = float(slice_.sum())
    if mass <= NULL_SET_MASS:
        raise ConditioningOnNullSetError(
            f"P({', '.join(f'X{a}={v}' for a, v in zip(rest, given))}) = {mass:.3e}"
        )
    return slice_ / mass


def conditional_expectation(
    j: JointPMF,
    target: int,
    mass_threshold: Optional[float] = None
) -> CETable:
    """
    E[X_target | rest] for every configuration whose slice mass exceeds the
    threshold; lighter configurations are skipped and counted.
    """
    threshold = settings.ce_mass_threshold if mass_threshold is None else mass_threshold
    rest = _check_target(j, target)
    moved = np.moveaxis(j.probs, target, -1)
    size = j.N + 1
    masses = moved.sum(axis=-1).reshape(-1)
    totals = (moved @ np.arange(size, dtype=float)).reshape(-1)
    configurations = np.indices((size,) * len(rest)).reshape(len(rest), -1).T
    kept = masses > threshold
    skipped = int(masses.size - kept.sum())
    if skipped:
        logger.debug(f"Conditional expectation of X{target}: {skipped} configurations below {threshold:g}")
    return CETable(
        target=target,
        given_axes=rest,
        configurations=configurations[kept],
        means=totals[kept] / masses[kept],
        masses=masses[kept],
        threshold=threshold,
        skipped=skipped,
    )


def _covering(table: CETable, coverage: float) -> np.ndarray:
    # heaviest configurations first, until the coverage share of the kept mass is reached
    order = np.argsort(-table.masses, kind="stable")
    cumulative = np.cumsum(table.masses[order])
    count = int(np.searchsorted(cumulative, coverage * cumulative[-1])) + 1
    return order[:min(count, order.size)]


def affine_deviation(
    j: JointPMF,
    target: int,
    mass_threshold: Optional[float] = None,
    coverage: Optional[float] = None
) -> AffineFitReport:
    """
    Weighted least-squares affine fit of E[X_target | rest].

    The fit and the reported deviation use the heaviest configurations that
    together carry at least ``coverage`` of the conditioning mass.

    Raises:
        UnderdeterminedFitError: With fewer than n + 1 usable configurations
            or a rank-deficient design
    """
    coverage = settings.coverage_target if coverage is None else coverage
    table = conditional_expectation(j, target, mass_threshold)
    if len(table) < j.n + 1:
        raise UnderdeterminedFitError(
            f"Only {len(table)} configurations above {table.threshold:g}; need {j.n + 1}"
        )
    used = _covering(table, coverage)
    if used.size < j.n + 1:
        used = np.argsort(-table.masses, kind="stable")[:j.n + 1]
    design = np.column_stack([table.configurations[used].astype(float), np.ones(used.size)])
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise UnderdeterminedFitError(
            f"Conditioning configurations of X{target} do not span an affine fit"
        )
    weights = np.sqrt(table.masses[used])
    coef, *_ = np.linalg.lstsq(design * weights[:, None], table.means[used] * weights, rcond=None)
    deviation = float(np.abs(design @ coef - table.means[used]).max())
    report = AffineFitReport(
        target=target,
        slopes=tuple(float(v) for v in coef[:-1]),
        intercept=float(coef[-1]),
        max_abs_deviation=deviation,
        mass_covered=float(table.masses[used].sum()),
        coverage_target=coverage,
        configurations_used=int(used.size),
    )
    logger.debug(f"Affine fit of X{target}: slopes={report.slopes}, deviation={deviation:.3e}")
    return report


def affine_residual(
    j: JointPMF,
    target: int,
    slopes: Sequence[float],
    intercept: float,
    mass_threshold: Optional[float] = None
) -> float:
    """Max |E[X_target | rest] - (slopes . rest + intercept)| over kept configurations."""
    table = conditional_expectation(j, target, mass_threshold)
    if len(table) == 0:
        raise ConditioningOnNullSetError(f"No configuration of X{target} above {table.threshold:g}")
    predicted = table.configurations @ np.asarray(slopes, dtype=float) + intercept
    return float(np.abs(table.means - predicted).max())


def moments(j: JointPMF) -> Tuple[np.ndarray, np.ndarray]:
    """Mean vector and covariance matrix of the (renormalized) tensor."""
    probs = j.probs / j.probs.sum()
    values = np.indices(probs.shape).reshape(j.n, -1).astype(float)
    weights = probs.reshape(-1)
    mean = values @ weights
    centered = values - mean[:, None]
    covariance = (centered * weights) @ centered.T
    return mean, covariance


def correlation_squared(j: JointPMF, first: int = 0, second: int = 1) -> float:
    _, cov = moments(j)
    return float(cov[first, second] ** 2 / (cov[first, first] * cov[second, second]))


def moment_slopes(j: JointPMF) -> Tuple[np.ndarray, np.ndarray]:
    """
    Slopes and intercepts of the best linear predictor of each coordinate
    from the others, read off the covariance matrix.

    For a law with linear conditional expectations these equal the true
    slopes.

    Returns:
        (n x n slope matrix with zero diagonal, intercept vector)
    """
    mean, cov = moments(j)
    n = j.n
    slopes = np.zeros((n, n))
    intercepts = np.zeros(n)
    for i in range(n):
        rest = [k for k in range(n) if k != i]
        row = np.linalg.solve(cov[np.ix_(rest, rest)], cov[rest, i])
        slopes[i, rest] = row
        intercepts[i] = mean[i] - row @ mean[rest]
    return slopes, intercepts


def write_ce_table_csv(
    table: CETable,
    path: Union[str, Path],
    digits: Optional[int] = None
) -> Path:
    """One row per configuration: conditioning values, conditional mean, slice mass."""
    digits = settings.csv_digits if digits is None else digits
    path = Path(path)
    table.to_frame().to_csv(path, index=False, float_format=f"%.{digits}g")
    logger.info(f"Wrote {len(table)} conditional means of X{table.target} to {path}")
    return path
