"""
Phase-one revised simplex with Bland's anti-cycling rule.

Solves min sum(artificials) over A x + s = b, x, s >= 0 (b >= 0 after row
sign flips). A zero optimum gives a feasible x; a positive optimum gives a
dual vector pi with pi A <= 0 and pi b > 0.

Rows are equilibrated to unit max-norm and the basis is refactorized from
the original columns at every pivot, so basic values, duals and reduced
costs never accumulate update error.
"""

from dataclasses import dataclass
from typing import Optional
import logging

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from config import settings
from config.exceptions import NumericalFailureError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhaseOneResult:
    """Outcome of the phase-one solve."""
    feasible: bool
    x: np.ndarray
    dual: np.ndarray
    objective: float
    iterations: int
    residual: float


class PhaseOneSimplex:
    """
    Basis bookkeeping over [A | I].

    Columns 0..n-1 are structural, n..n+m-1 artificial. Artificials leave
    the basis but never re-enter.
    """

    def __init__(
        self,
        matrix: np.ndarray,
        rhs: np.ndarray,
        pivot_tolerance: Optional[float] = None,
        max_iterations: Optional[int] = None
    ):
        matrix = np.array(matrix, dtype=float)
        rhs = np.array(rhs, dtype=float)
        if matrix.ndim != 2 or rhs.shape != (matrix.shape[0],):
            raise ValueError(f"Shape mismatch: matrix {matrix.shape}, rhs {rhs.shape}")
        self.m, self.n = matrix.shape

        # equilibrate, then flip rows to b >= 0
        norms = np.abs(matrix).max(axis=1)
        norms = np.where(norms > 0, norms, 1.0)
        flip = rhs < 0
        self.row_scale = np.where(flip, -1.0, 1.0) / norms
        self.matrix = matrix * self.row_scale[:, None]
        self.rhs = rhs * self.row_scale
        self.column_norms = np.abs(self.matrix).max(axis=0)

        self.tol = settings.lp_pivot_tolerance if pivot_tolerance is None else pivot_tolerance
        self.max_iterations = settings.lp_max_iterations if max_iterations is None else max_iterations
        self.basis = np.arange(self.n, self.n + self.m)
        self.iterations = 0
        self._refactor()

    def _basis_columns(self) -> np.ndarray:
        columns = np.zeros((self.m, self.m))
        structural = self.basis < self.n
        columns[:, structural] = self.matrix[:, self.basis[structural]]
        slots = np.flatnonzero(~structural)
        columns[self.basis[slots] - self.n, slots] = 1.0
        return columns

    def _refactor(self):
        self.lu = lu_factor(self._basis_columns(), check_finite=False)
        x_b = lu_solve(self.lu, self.rhs, check_finite=False)
        scale = max(1.0, float(np.abs(x_b).max()))
        x_b[np.abs(x_b) <= self.tol * scale] = 0.0
        self.x_b = np.clip(x_b, 0.0, None)
        cost = (self.basis >= self.n).astype(float)
        self.pi = lu_solve(self.lu, cost, trans=1, check_finite=False)

    @property
    def objective(self) -> float:
        return float(self.x_b[self.basis >= self.n].sum())

    def reduced_costs(self) -> np.ndarray:
        return -(self.pi @ self.matrix)

    def bland_step(self, stop_below: float) -> str:
        """One pivot; returns 'optimal' or 'go_on'."""
        if self.objective <= stop_below:
            return "optimal"
        costs = self.reduced_costs()
        scale = max(1.0, float(np.abs(self.pi).max()))
        candidates = np.flatnonzero(costs < -self.tol * scale * (1.0 + self.column_norms))
        if candidates.size == 0:
            return "optimal"
        j = int(candidates[0])
        direction = lu_solve(self.lu, self.matrix[:, j], check_finite=False)
        rows = np.flatnonzero(direction > self.tol * max(1.0, float(np.abs(direction).max())))
        if rows.size == 0:
            raise NumericalFailureError(f"Column {j} improves the phase-one objective without bound")
        ratios = self.x_b[rows] / direction[rows]
        best = ratios.min()
        tied = rows[ratios <= best + self.tol * max(1.0, abs(best))]
        i = int(tied[np.argmin(self.basis[tied])])
        logger.debug(f"Pivot {self.basis[i]} -> {j} (ratio {best:.3e})")
        self.basis[i] = j
        self.iterations += 1
        self._refactor()
        return "go_on"

    def solve(self, stop_below: float) -> None:
        while self.bland_step(stop_below) != "optimal":
            if self.iterations >= self.max_iterations:
                raise NumericalFailureError(
                    f"Simplex did not terminate within {self.max_iterations} pivots"
                )

    def primal(self) -> np.ndarray:
        x = np.zeros(self.n)
        structural = self.basis < self.n
        x[self.basis[structural]] = self.x_b[structural]
        return x

    def dual(self) -> np.ndarray:
        """pi for the original (unscaled, unflipped) rows."""
        return self.pi * self.row_scale


def _polish(
    matrix: np.ndarray,
    rhs: np.ndarray,
    x: np.ndarray,
    floor: float,
    residual_tolerance: float,
    refinements: int = 2
) -> np.ndarray:
    # drop round-off cells, re-solve on the remaining support
    support = np.flatnonzero(x >= floor)
    if support.size == 0:
        return x
    columns = matrix[:, support]
    values, *_ = np.linalg.lstsq(columns, rhs, rcond=None)
    for _ in range(refinements):
        correction, *_ = np.linalg.lstsq(columns, rhs - columns @ values, rcond=None)
        values += correction
    if values.min() < -floor:
        return x
    polished = np.zeros_like(x)
    polished[support] = np.clip(values, 0.0, None)
    if np.abs(matrix @ polished - rhs).max() > residual_tolerance:
        return x
    return polished


def phase_one(
    matrix: np.ndarray,
    rhs: np.ndarray,
    pivot_tolerance: Optional[float] = None,
    residual_tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None
) -> PhaseOneResult:
    """
    Decide feasibility of A x = b, x >= 0.

    Args:
        matrix: Constraint matrix (m x n)
        rhs: Right-hand side (m)
        pivot_tolerance: Relative zero threshold for reduced costs and pivots
        residual_tolerance: Objective below which the system is feasible
        max_iterations: Pivot budget

    Returns:
        PhaseOneResult with x (feasible case) and the final dual vector
    """
    residual_tolerance = settings.lp_residual_tolerance if residual_tolerance is None else residual_tolerance
    simplex = PhaseOneSimplex(matrix, rhs, pivot_tolerance, max_iterations)
    simplex.solve(stop_below=residual_tolerance * 1e-3)
    # equals dual @ rhs in the original row units
    objective = simplex.objective
    feasible = objective <= residual_tolerance
    matrix = np.asarray(matrix, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    x = simplex.primal()
    if feasible:
        x = _polish(matrix, rhs, x, simplex.tol, residual_tolerance)
    residual = float(np.abs(matrix @ x - rhs).max())
    logger.info(
        f"Phase one: {'feasible' if feasible else 'infeasible'} after {simplex.iterations} pivots "
        f"(objective {objective:.3e}, residual {residual:.3e})"
    )
    return PhaseOneResult(
        feasible=feasible,
        x=x,
        dual=simplex.dual(),
        objective=objective,
        iterations=simplex.iterations,
        residual=residual,
    )
