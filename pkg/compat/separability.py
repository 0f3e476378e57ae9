"""
Separability test for a pair of conditional pmfs.

Two positive conditionals l(x|y), l(y|x) come from one joint law iff
log l(x|y) - log l(y|x) = u(x) + v(y), i.e. every rectangle second
difference of the log ratio vanishes.
"""

from typing import Optional
import logging

import numpy as np

from config import settings
from config.exceptions import DomainMismatchError
from families import JointPMF
from .models import SeparabilityReport


logger = logging.getLogger(__name__)


def log_ratio_residual(log_ratio: np.ndarray, valid: np.ndarray) -> float:
    """
    max |L(x,y) + L(x',y') - L(x,y') - L(x',y)| over rectangles of valid cells.
    """
    rows = log_ratio.shape[0]
    worst = 0.0
    for x in range(rows - 1):
        difference = log_ratio[x][None, :] - log_ratio[x + 1:]
        mask = valid[x][None, :] & valid[x + 1:]
        masked_high = np.where(mask, difference, -np.inf).max(axis=1)
        masked_low = np.where(mask, difference, np.inf).min(axis=1)
        spread = masked_high - masked_low
        spread = spread[np.isfinite(spread)]
        if spread.size:
            worst = max(worst, float(spread.max()))
    return worst


def separability_check_conditionals(
    x_given_y: np.ndarray,
    y_given_x: np.ndarray,
    floor: Optional[float] = None,
    tolerance: float = 1e-9
) -> SeparabilityReport:
    """
    Separability of two conditional tables indexed [x, y].

    Args:
        x_given_y: l(x|y)
        y_given_x: l(y|x)
        floor: Cells where both conditionals fall below it are excluded
        tolerance: Residual up to which the pair is declared separable

    Raises:
        DomainMismatchError: If exactly one conditional vanishes in a cell
    """
    floor = settings.separability_floor if floor is None else floor
    x_given_y = np.asarray(x_given_y, dtype=float)
    y_given_x = np.asarray(y_given_x, dtype=float)
    if x_given_y.shape != y_given_x.shape:
        raise ValueError(f"Conditional tables differ in shape: {x_given_y.shape} vs {y_given_x.shape}")
    zero_x = x_given_y <= 0
    zero_y = y_given_x <= 0
    mismatch = zero_x ^ zero_y
    if np.any(mismatch):
        x, y = np.argwhere(mismatch)[0]
        raise DomainMismatchError(
            f"Conditional supports differ at (x={x}, y={y}): the two conditionals cannot share a joint law"
        )
    valid = ~zero_x & (x_given_y >= floor) & (y_given_x >= floor)
    with np.errstate(divide="ignore"):
        log_ratio = np.log(np.where(valid, x_given_y, 1.0)) - np.log(np.where(valid, y_given_x, 1.0))
    residual = log_ratio_residual(log_ratio, valid)
    excluded = int(valid.size - valid.sum())
    logger.debug(f"Separability residual {residual:.3e}, {excluded} cells excluded")
    return SeparabilityReport(
        residual=residual,
        excluded_cells=excluded,
        grid_shape=tuple(log_ratio.shape),
        tolerance=tolerance,
    )


def separability_check(
    j: JointPMF,
    floor: Optional[float] = None,
    tolerance: float = 1e-9
) -> SeparabilityReport:
    """
    Separability residual of the conditionals of a bivariate pmf.

    Cells with pmf below the floor are excluded and counted.
    """
    if j.n != 2:
        raise ValueError(f"Separability needs a bivariate pmf, got n={j.n}")
    floor = settings.separability_floor if floor is None else floor
    probs = j.probs
    kept = probs >= floor
    # rows or columns with no kept cell cannot be normalized
    row_mass = probs.sum(axis=1, keepdims=True)
    col_mass = probs.sum(axis=0, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_given_y = np.where(kept, probs / col_mass, 0.0)
        y_given_x = np.where(kept, probs / row_mass, 0.0)
    report = separability_check_conditionals(x_given_y, y_given_x, floor=0.0, tolerance=tolerance)
    excluded = int(probs.size - kept.sum())
    return SeparabilityReport(
        residual=report.residual,
        excluded_cells=excluded,
        grid_shape=report.grid_shape,
        tolerance=tolerance,
    )
