"""
Conditional specification models and compatibility verdicts.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from distributions import CountDistribution
from families import FamilyDescriptor


class LinearPoissonSpec(BaseModel):
    """X | Y ~ Poisson(cY + d) and Y | X ~ Poisson(aX + b)."""
    model_config = ConfigDict(frozen=True)

    a: float = Field(ge=0)
    b: float = Field(gt=0)
    c: float = Field(ge=0)
    d: float = Field(gt=0)

    @property
    def n(self) -> int:
        return 2


class CARSpec(BaseModel):
    """
    Compound autoregressive specification.

    X_i | rest = sum_{j != i} sum_{k <= X_j} W_{ij,k} + eps_i, where
    ``thinning[i][j]`` is the law of W_{ij} and ``innovation[i]`` the law of eps_i.
    Diagonal thinning entries are None.
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2)
    thinning: List[List[Optional[CountDistribution]]]
    innovation: List[CountDistribution]

    @model_validator(mode="after")
    def _check_shape(self):
        if len(self.innovation) != self.n or len(self.thinning) != self.n:
            raise ValueError(f"Expected {self.n} innovations and {self.n} thinning rows")
        for i, row in enumerate(self.thinning):
            if len(row) != self.n:
                raise ValueError(f"Thinning row {i} has {len(row)} entries, expected {self.n}")
            for j, law in enumerate(row):
                if (law is None) != (i == j):
                    raise ValueError(f"Thinning entry ({i},{j}) must be {'empty' if i == j else 'set'}")
        return self

    @classmethod
    def bivariate(cls, thin_x, thin_y, eps, eta) -> "CARSpec":
        """X | Y = sum_{k<=Y} thin_x + eps, Y | X = sum_{k<=X} thin_y + eta."""
        return cls(n=2, thinning=[[None, thin_x], [thin_y, None]], innovation=[eps, eta])

    def law(self, i: int, j: int):
        return self.thinning[i][j]


BetaPair = Tuple[float, float]


class RandomCoeffSpec(BaseModel):
    """
    Binomial thinning with Beta-distributed probabilities.

    X_i | rest = sum_{j != i} Bin(X_j, p_ij) + eps_i with p_ij ~ Beta(beta_params[i][j]).
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2)
    beta_params: List[List[Optional[BetaPair]]]
    innovation: List[CountDistribution]

    @model_validator(mode="after")
    def _check_shape(self):
        if len(self.innovation) != self.n or len(self.beta_params) != self.n:
            raise ValueError(f"Expected {self.n} innovations and {self.n} beta rows")
        for i, row in enumerate(self.beta_params):
            if len(row) != self.n:
                raise ValueError(f"Beta row {i} has {len(row)} entries, expected {self.n}")
            for j, pair in enumerate(row):
                if (pair is None) != (i == j):
                    raise ValueError(f"Beta entry ({i},{j}) must be {'empty' if i == j else 'set'}")
                if pair is not None and min(pair) <= 0:
                    raise ValueError(f"Beta parameters ({i},{j}) must be positive, got {pair}")
        return self

    @classmethod
    def bivariate(cls, beta_x: BetaPair, beta_y: BetaPair, eps, eta) -> "RandomCoeffSpec":
        return cls(n=2, beta_params=[[None, beta_x], [beta_y, None]], innovation=[eps, eta])


class CompatVerdict(BaseModel):
    """Outcome of a compatibility check."""
    model_config = ConfigDict(frozen=True)

    compatible: bool
    solution_family: Optional[FamilyDescriptor] = None
    reason: str = ""
    violation: float = 0.0
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _solution_when_compatible(self):
        if self.compatible and self.solution_family is None:
            raise ValueError("A compatible verdict must name its solution family")
        return self

    @classmethod
    def reject(cls, reason: str, violation: float = 0.0, **details: Any) -> "CompatVerdict":
        return cls(compatible=False, reason=reason, violation=violation, details=details)

    @classmethod
    def accept(cls, family: FamilyDescriptor, reason: str, **details: Any) -> "CompatVerdict":
        return cls(compatible=True, solution_family=family, reason=reason, details=details)


@dataclass(frozen=True)
class SeparabilityReport:
    """Max second difference of log l(x|y)/l(y|x) over a grid."""
    residual: float
    excluded_cells: int
    grid_shape: Tuple[int, int]
    tolerance: float

    @property
    def separable(self) -> bool:
        return self.residual <= self.tolerance
