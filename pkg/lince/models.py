"""
Models for linear conditional expectation specifications and LP artifacts.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from families import ThetaFamilyParams


class LinearCESpec(BaseModel):
    """
    E[X_i | rest] = intercepts[i] + sum_{j != i} slopes[i][j] X_j.

    For n = 2 the usual names are E[X|Y] = cY + d and E[Y|X] = aX + b.
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2)
    slopes: List[List[float]]
    intercepts: List[float]

    @model_validator(mode="after")
    def _check_shape(self):
        matrix = np.asarray(self.slopes, dtype=float)
        if matrix.shape != (self.n, self.n):
            raise ValueError(f"Slope matrix must be {self.n}x{self.n}, got {matrix.shape}")
        if len(self.intercepts) != self.n:
            raise ValueError(f"Expected {self.n} intercepts, got {len(self.intercepts)}")
        if not np.all(np.isfinite(matrix)) or not np.all(np.isfinite(self.intercepts)):
            raise ValueError("Slopes and intercepts must be finite")
        if np.any(np.diag(matrix) != 0):
            raise ValueError("Slope matrix must have a zero diagonal")
        return self

    @classmethod
    def bivariate(cls, a: float, b: float, c: float, d: float) -> "LinearCESpec":
        """E[X|Y] = cY + d, E[Y|X] = aX + b."""
        return cls(n=2, slopes=[[0.0, c], [a, 0.0]], intercepts=[d, b])

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.slopes, dtype=float)

    def coefficients(self) -> Tuple[float, float, float, float]:
        """(a, b, c, d) of a bivariate spec."""
        if self.n != 2:
            raise ValueError("(a, b, c, d) is only defined for n = 2")
        return self.slopes[1][0], self.intercepts[1], self.slopes[0][1], self.intercepts[0]


@dataclass(frozen=True)
class FarkasCertificate:
    """
    Infeasibility witness: y0 < 0 and y_1..y_{2N+2} with
    (a i - j + b) y_{i+1} + (-i + c j + d) y_{j+N+2} > 0 for all 0 <= i, j <= N.
    """
    y0: float
    y: np.ndarray
    N: int
    n: int = 2

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    def as_vector(self) -> np.ndarray:
        return np.concatenate(([self.y0], self.y))


@dataclass(frozen=True)
class ConditionReport:
    """Necessary conditions of a linear-CE specification."""
    n: int
    case: str
    satisfied: bool
    product: Optional[float] = None
    minors: Dict[Tuple[int, ...], float] = field(default_factory=dict)


@dataclass(frozen=True)
class ThetaDomainReport:
    """Region of (a, b, c, d) covered by the ThetaRatio/NB family."""
    region: str
    params: Optional[ThetaFamilyParams] = None
    delta: Optional[float] = None

    @property
    def inside(self) -> bool:
        return self.params is not None


@dataclass(frozen=True)
class LPSystem:
    """Equality system A p = rhs, p >= 0, columns in lexicographic cell order."""
    matrix: np.ndarray
    rhs: np.ndarray
    N: int
    n: int = 2

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    def cell(self, column: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in np.unravel_index(column, (self.N + 1,) * self.n))
