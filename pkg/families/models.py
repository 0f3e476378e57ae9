"""
Data models for compatible joint count distributions.
"""

from typing import Annotated, Any, Dict, List, Optional, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config import settings
from config.exceptions import IncompatibleParametersError, ParameterDomainError
from .base import FamilyType


class FamilyDescriptor(BaseModel):
    """A family tag plus resolved parameters."""
    model_config = ConfigDict(frozen=True)

    family: FamilyType
    params: Dict[str, Any] = Field(default_factory=dict)

    def describe(self) -> str:
        parts = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family.value}({parts})"


class ThetaFamilyParams(BaseModel):
    """
    Parameters of the bivariate family with ThetaRatio thinnings and NB innovations.

    Field bounds are enforced on construction; the cross constraints are
    checked by ``check_constraints``.
    """
    model_config = ConfigDict(frozen=True)

    delta: float = Field(gt=0)
    theta1: float = Field(gt=0)
    theta2: float = Field(gt=-1)
    theta3: float = Field(gt=0)
    theta4: float = Field(gt=-1)

    @property
    def slope_x(self) -> float:
        """Slope of E[X|Y]."""
        return self.theta1 - self.theta2

    @property
    def slope_y(self) -> float:
        """Slope of E[Y|X]."""
        return self.theta3 - self.theta4

    def sameproduct_residual(self) -> float:
        lhs = self.theta4 * (self.theta1 + self.theta3 * self.slope_x)
        rhs = self.theta2 * (self.theta3 + self.theta1 * self.slope_y)
        return lhs - rhs

    def violations(self, tolerance: Optional[float] = None) -> List[str]:
        """Names of the violated cross constraints."""
        tol = settings.parameter_tolerance if tolerance is None else tolerance
        found = []
        if not self.theta2 < self.theta1:
            found.append(f"theta2 < theta1 (theta1={self.theta1}, theta2={self.theta2})")
        if not self.theta4 < self.theta3:
            found.append(f"theta4 < theta3 (theta3={self.theta3}, theta4={self.theta4})")
        scale = max(1.0, abs(self.theta4 * self.theta1), abs(self.theta2 * self.theta3))
        residual = self.sameproduct_residual()
        if abs(residual) > tol * scale:
            found.append(f"sameproduct identity (residual {residual:.3e})")
        product = self.slope_x * self.slope_y
        if not product < 1.0:
            found.append(f"(theta1-theta2)(theta3-theta4) < 1 (got {product:g})")
        if np.sign(self.theta2) != np.sign(self.theta4):
            found.append(
                f"theta2 and theta4 share a sign (theta2={self.theta2}, theta4={self.theta4})"
            )
        return found

    def check_constraints(self, tolerance: Optional[float] = None) -> "ThetaFamilyParams":
        """
        Raises:
            IncompatibleParametersError: Naming every violated constraint
        """
        found = self.violations(tolerance)
        if found:
            raise IncompatibleParametersError("Violated: " + "; ".join(found))
        return self


class MarkovChainParams(BaseModel):
    """Rates of the chain N -> (X, Y) with NB links."""
    model_config = ConfigDict(frozen=True)

    delta: float = Field(gt=0)
    p0: float = Field(gt=0, lt=1)
    p1: float = Field(gt=0, lt=1)
    p2: float = Field(gt=0, lt=1)


PositiveFloat = Annotated[float, Field(gt=0)]
NonNegativeFloat = Annotated[float, Field(ge=0)]


class TrivariatePoissonParams(BaseModel):
    """(Z0 + Z1, Z0 + Z2) with independent Poisson components."""
    model_config = ConfigDict(frozen=True)

    lambda0: float = Field(gt=0)
    lambda1: float = Field(gt=0)
    lambda2: float = Field(gt=0)


class PoissonGammaParams(BaseModel):
    """X_i | U ~ Poisson(lambda_i U), U ~ Gamma(shape alpha, rate beta)."""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0)
    beta: float = Field(gt=0)
    lambdas: List[NonNegativeFloat] = Field(min_length=2)

    @model_validator(mode="after")
    def _some_positive_rate(self):
        if not any(rate > 0 for rate in self.lambdas):
            raise ValueError("At least one rate must be positive")
        return self


class TrivariateNBParams(BaseModel):
    """(Z + E1, Z + E2) with NB(alpha), NB(beta1), NB(beta2) sharing theta."""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0)
    beta1: float = Field(gt=0)
    beta2: float = Field(gt=0)
    theta: float = Field(gt=0, lt=1)


class BetaNBParams(BaseModel):
    """X_i | U ~ NB(r_i, U), U ~ Beta(alpha1, alpha2)."""
    model_config = ConfigDict(frozen=True)

    rs: List[PositiveFloat] = Field(min_length=2)
    alpha1: float = Field(gt=0)
    alpha2: float = Field(gt=0)


class MultinomialParams(BaseModel):
    """Multinomial(size; p1, p2, p3)."""
    model_config = ConfigDict(frozen=True)

    size: int = Field(ge=1)
    p1: float = Field(gt=0, lt=1)
    p2: float = Field(gt=0, lt=1)
    p3: float = Field(gt=0, lt=1)

    @model_validator(mode="after")
    def _sum_to_one(self):
        total = self.p1 + self.p2 + self.p3
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"Cell probabilities sum to {total!r}, not 1")
        return self

    @property
    def probs(self) -> List[float]:
        return [self.p1, self.p2, self.p3]


M = TypeVar("M", bound=BaseModel)


def validate_params(model: Type[M], **params: Any) -> M:
    """
    Construct a parameter model, reporting failures as ParameterDomainError.
    """
    try:
        return model(**params)
    except ValidationError as e:
        raise ParameterDomainError(f"Invalid {model.__name__} {params}: {e}") from e
