"""
Count-distribution catalogue models.

Every law is a frozen pydantic model tagged by ``kind`` so that a
``CountDistribution`` can be parsed from plain dictionaries.
"""

from typing import Annotated, Any, Dict, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config.exceptions import ParameterDomainError


class _Law(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)
    
    def describe(self) -> str:
        params = ", ".join(
            f"{name}={value:g}" if isinstance(value, float) else f"{name}={value}"
            for name, value in self.model_dump(exclude={"kind"}).items()
        )
        return f"{self.kind}({params})"


class Poisson(_Law):
    """Poisson law with rate ``lam``."""
    kind: Literal["poisson"] = "poisson"
    lam: float = Field(gt=0, alias="lambda")


class NegBinomial(_Law):
    """NB with r successes and success probability p: C(k+r-1,k) p^r (1-p)^k."""
    kind: Literal["negbinomial"] = "negbinomial"
    r: float = Field(gt=0)
    p: float = Field(gt=0, lt=1)


class Geometric(_Law):
    """NB(1, p)."""
    kind: Literal["geometric"] = "geometric"
    p: float = Field(gt=0, lt=1)


class Bernoulli(_Law):
    kind: Literal["bernoulli"] = "bernoulli"
    p: float = Field(ge=0, le=1)


class ThetaRatio(_Law):
    """
    Law with pgf (1 + theta_num (1-u)) / (1 + theta_den (1-u)).
    
    theta_num in (0, theta_den) gives a zero-inflated geometric law,
    theta_num in (-1, 0) a Bernoulli(-theta_num) plus geometric convolution.
    """
    kind: Literal["theta_ratio"] = "theta_ratio"
    theta_num: float = Field(gt=-1)
    theta_den: float = Field(gt=0)
    
    @model_validator(mode="after")
    def _check_order(self):
        if not self.theta_den > self.theta_num:
            raise ValueError(
                f"theta_den={self.theta_den} must exceed theta_num={self.theta_num}"
            )
        return self


class BetaNB(_Law):
    """NB(r, U) mixed over U ~ Beta(alpha1, alpha2)."""
    kind: Literal["beta_nb"] = "beta_nb"
    r: float = Field(gt=0)
    alpha1: float = Field(gt=0)
    alpha2: float = Field(gt=0)


class Degenerate(_Law):
    kind: Literal["degenerate"] = "degenerate"
    k: int = Field(ge=0)


CountDistribution = Annotated[
    Union[Poisson, NegBinomial, Geometric, Bernoulli, ThetaRatio, BetaNB, Degenerate],
    Field(discriminator="kind"),
]

LAW_TYPES = {
    "poisson": Poisson,
    "negbinomial": NegBinomial,
    "geometric": Geometric,
    "bernoulli": Bernoulli,
    "theta_ratio": ThetaRatio,
    "beta_nb": BetaNB,
    "degenerate": Degenerate,
}


def make_distribution(kind: str, **params: Any):
    """
    Build a catalogue law, reporting bad parameters as ParameterDomainError.
    
    Args:
        kind: One of the ``LAW_TYPES`` tags
        **params: Law parameters (``lam`` or ``lambda`` for Poisson)
    """
    law_type = LAW_TYPES.get(kind)
    if law_type is None:
        raise ParameterDomainError(f"Unknown count law '{kind}'")
    try:
        return law_type(**params)
    except ValidationError as e:
        raise ParameterDomainError(f"Invalid {kind} parameters {params}: {e}") from e


def distribution_from_dict(data: Dict[str, Any]):
    """Parse a tagged dictionary such as ``{"kind": "poisson", "lambda": 2}``."""
    data = dict(data)
    kind = data.pop("kind", None)
    if kind is None:
        raise ParameterDomainError(f"Missing 'kind' in law description {data}")
    return make_distribution(kind, **data)
