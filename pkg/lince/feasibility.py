"""
Bounded-support feasibility of linear conditional expectations.

On {0..N}^2 the unknowns are p_ij; E[Y|X=i] = a i + b and E[X|Y=j] = c j + d
become homogeneous equality rows next to the normalization row. Either a
nonnegative solution exists or a Farkas vector certifies that none does.
"""

from pathlib import Path
from typing import Optional, Union
import logging

import numpy as np
import pandas as pd

from config import settings
from config.exceptions import NumericalFailureError, ParameterDomainError
from families import AffineCE, JointPMF
from .models import FarkasCertificate, LinearCESpec, LPSystem
from .simplex import phase_one


logger = logging.getLogger(__name__)

LP_FAMILY = "lp_solution"


def build_lp_system(spec: LinearCESpec, N: int) -> LPSystem:
    """
    Equality rows of the bivariate problem.

    Row 0 is sum p = 1, rows 1..N+1 read sum_j (a i + b - j) p_ij = 0 and rows
    N+2..2N+2 read sum_i (c j + d - i) p_ij = 0. Column i (N+1) + j holds p_ij.
    """
    if spec.n != 2:
        raise ParameterDomainError(f"build_lp_system needs n = 2, got n={spec.n}; use build_lp_system_general")
    if N < 1:
        raise ParameterDomainError(f"Support bound must be positive, got {N}")
    a, b, c, d = spec.coefficients()
    size = N + 1
    i, j = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    columns = np.arange(size * size).reshape(size, size)

    matrix = np.zeros((2 * size + 1, size * size))
    matrix[0] = 1.0
    matrix[1 + i, columns] = a * i + b - j
    matrix[1 + size + j, columns] = c * j + d - i
    rhs = np.zeros(2 * size + 1)
    rhs[0] = 1.0
    return LPSystem(matrix=matrix, rhs=rhs, N=N, n=2)


def build_lp_system_general(spec: LinearCESpec, N: int) -> LPSystem:
    """
    Same constraint pattern for any n.

    After the normalization row come, for each target i in turn, one row per
    configuration of the other coordinates (lexicographic):
    sum_{x_i} (intercept_i + sum_{k != i} A_ik x_k - x_i) p(x) = 0.
    """
    if N < 1:
        raise ParameterDomainError(f"Support bound must be positive, got {N}")
    n, size = spec.n, N + 1
    grid = np.indices((size,) * n).reshape(n, -1)
    slopes = spec.matrix
    intercepts = np.asarray(spec.intercepts, dtype=float)
    block = size ** (n - 1)

    matrix = np.zeros((1 + n * block, size ** n))
    matrix[0] = 1.0
    columns = np.arange(size ** n)
    for target in range(n):
        rest = [k for k in range(n) if k != target]
        row_in_block = np.ravel_multi_index(grid[rest], (size,) * (n - 1))
        coefficient = intercepts[target] + slopes[target, rest] @ grid[rest] - grid[target]
        matrix[1 + target * block + row_in_block, columns] = coefficient
    rhs = np.zeros(matrix.shape[0])
    rhs[0] = 1.0
    return LPSystem(matrix=matrix, rhs=rhs, N=N, n=n)


def _predicted(spec: LinearCESpec) -> tuple:
    matrix = spec.matrix
    return tuple(
        AffineCE(
            target=i,
            slopes=tuple(float(matrix[i, k]) for k in range(spec.n) if k != i),
            intercept=float(spec.intercepts[i]),
        )
        for i in range(spec.n)
    )


def _solve(spec: LinearCESpec, system: LPSystem, exploratory: bool):
    result = phase_one(system.matrix, system.rhs)
    N = system.N
    if result.feasible:
        # rows other than the normalization are homogeneous
        x = result.x / result.x.sum()
        residual = float(np.abs(system.matrix @ x - system.rhs).max())
        if residual > settings.lp_residual_tolerance:
            raise NumericalFailureError(
                f"Feasible basis found but the equality residual is {residual:.3e}"
            )
        probs = x.reshape((N + 1,) * system.n)
        return JointPMF(
            probs=probs,
            captured_mass=1.0,
            family=LP_FAMILY,
            predicted=_predicted(spec),
            metadata={
                "N": N,
                "residual": residual,
                "pivots": result.iterations,
                "exploratory": exploratory,
            },
        )
    if not result.objective > 0:
        raise NumericalFailureError("Infeasible verdict with a nonpositive phase-one optimum")
    y = -result.dual / result.objective
    return FarkasCertificate(y0=float(y[0]), y=y[1:], N=N, n=system.n)


def solve_feasibility(spec: LinearCESpec, N: int) -> Union[JointPMF, FarkasCertificate]:
    """
    Find a pmf on {0..N}^2 with the prescribed conditional expectations, or
    prove that none exists.

    Args:
        spec: Bivariate linear conditional expectation specification
        N: Per-axis support bound

    Returns:
        JointPMF (family "lp_solution", captured mass 1) or a verified
        FarkasCertificate. The returned vertex depends on the pivot rule.

    Raises:
        NumericalFailureError: If neither outcome can be confirmed
    """
    logger.info(f"Solving bounded-support feasibility for {spec.coefficients()} with N={N}")
    outcome = _solve(spec, build_lp_system(spec, N), exploratory=False)
    if isinstance(outcome, FarkasCertificate) and not verify_certificate(outcome, spec):
        raise NumericalFailureError(
            f"Phase-one dual does not verify as a certificate at N={N}"
        )
    logger.info(f"Outcome: {'feasible pmf' if isinstance(outcome, JointPMF) else 'Farkas certificate'}")
    return outcome


def solve_feasibility_experimental(spec: LinearCESpec, N: int) -> Union[JointPMF, FarkasCertificate]:
    """
    n-dimensional variant of solve_feasibility.

    Nothing guarantees a solution for n >= 3; results carry
    ``exploratory=True`` and certificates are checked against the general
    constraint matrix.
    """
    logger.warning(f"Exploratory {spec.n}-dimensional feasibility solve at N={N}")
    system = build_lp_system_general(spec, N)
    outcome = _solve(spec, system, exploratory=True)
    if isinstance(outcome, FarkasCertificate) and not _verify_against(outcome, system):
        raise NumericalFailureError(f"Phase-one dual does not verify as a certificate at N={N}")
    return outcome


def _verify_against(cert: FarkasCertificate, system: LPSystem, margin: Optional[float] = None) -> bool:
    margin = settings.certificate_margin if margin is None else margin
    if cert.y0 >= 0 or cert.y.size != system.matrix.shape[0] - 1:
        return False
    return bool(np.all(cert.y @ system.matrix[1:] > margin))


def verify_certificate(
    cert: FarkasCertificate,
    spec: LinearCESpec,
    margin: Optional[float] = None
) -> bool:
    """
    True iff y0 < 0 and (a i - j + b) y_{i+1} + (-i + c j + d) y_{j+N+2} > margin
    for every 0 <= i, j <= N.
    """
    margin = settings.certificate_margin if margin is None else margin
    if spec.n != 2:
        return _verify_against(cert, build_lp_system_general(spec, cert.N), margin)
    N = cert.N
    y = np.asarray(cert.y, dtype=float)
    if y.size != 2 * N + 2 or not cert.y0 < 0:
        return False
    a, b, c, d = spec.coefficients()
    i, j = np.meshgrid(np.arange(N + 1), np.arange(N + 1), indexing="ij")
    lhs = (a * i - j + b) * y[:N + 1][:, None] + (-i + c * j + d) * y[N + 1:][None, :]
    return bool(np.all(lhs > margin))


def certificate_margin_of(cert: FarkasCertificate, spec: LinearCESpec) -> float:
    """Smallest left-hand side of the strict inequalities."""
    a, b, c, d = spec.coefficients()
    N = cert.N
    i, j = np.meshgrid(np.arange(N + 1), np.arange(N + 1), indexing="ij")
    lhs = (a * i - j + b) * cert.y[:N + 1][:, None] + (-i + c * j + d) * cert.y[N + 1:][None, :]
    return float(lhs.min())


def write_certificate_csv(
    cert: FarkasCertificate,
    path: Union[str, Path],
    digits: Optional[int] = None
) -> Path:
    """Write ``y0,y1,...`` as one CSV line."""
    digits = settings.csv_digits if digits is None else digits
    path = Path(path)
    pd.DataFrame([cert.as_vector()]).to_csv(
        path, header=False, index=False, float_format=f"%.{digits}g"
    )
    logger.info(f"Wrote certificate of length {cert.y.size + 1} to {path}")
    return path
