"""
Base family class for all compatible joint count distributions.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple
import logging

import numpy as np

from config import settings
from config.exceptions import MomentDivergenceError, ParameterDomainError
from distributions import support_bound


logger = logging.getLogger(__name__)

# Captured-mass shortfall above which a truncated build is reported
MASS_SHORTFALL_WARNING = 1e-6


class FamilyType(Enum):
    """Constructible joint families."""
    INDEPENDENT = "independent"
    TRIVARIATE_POISSON = "trivariate_poisson"
    POISSON_GAMMA = "poisson_gamma"
    THETA = "theta"
    TRIVARIATE_NB = "trivariate_nb"
    BETA_NB = "beta_nb"
    MULTINOMIAL_MIX = "multinomial_mix"
    JOINT_MIX = "joint_mix"
    MARKOV_CHAIN = "markov_chain"


@dataclass(frozen=True)
class AffineCE:
    """
    E[X_target | rest] = slopes . rest + intercept.

    ``slopes`` follow the remaining coordinates in increasing axis order.
    """
    target: int
    slopes: Tuple[float, ...]
    intercept: float

    def evaluate(self, given: Sequence[float]) -> float:
        return float(np.dot(self.slopes, given) + self.intercept)


@dataclass(frozen=True)
class JointPMF:
    """Dense probability tensor on {0..N}^n with captured-mass metadata."""

    probs: np.ndarray
    captured_mass: float
    family: str = "custom"
    predicted: Tuple[AffineCE, ...] = ()
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim < 1 or len(set(probs.shape)) != 1:
            raise ValueError(f"Joint pmf must be a cube, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)) or probs.min() < 0:
            raise ValueError("Joint pmf entries must be finite and nonnegative")
        if self.captured_mass > 1.0 + 1e-12:
            raise ValueError(f"Captured mass {self.captured_mass!r} exceeds 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "predicted", tuple(self.predicted))

    @classmethod
    def from_array(cls, probs, **kwargs) -> "JointPMF":
        """Wrap a tensor, taking the captured mass from its sum."""
        probs = np.asarray(probs, dtype=float)
        return cls(probs=probs, captured_mass=float(probs.sum()), **kwargs)

    @property
    def n(self) -> int:
        return self.probs.ndim

    @property
    def N(self) -> int:
        return self.probs.shape[0] - 1

    def marginal(self, axes: Sequence[int]) -> "JointPMF":
        """Joint pmf of the coordinates in ``axes``, kept in increasing order."""
        keep = sorted(axes)
        dropped = tuple(i for i in range(self.n) if i not in keep)
        return JointPMF(
            probs=self.probs.sum(axis=dropped),
            captured_mass=self.captured_mass,
            family=f"{self.family}[{','.join(str(i) for i in keep)}]",
        )

    def predicted_for(self, target: int) -> Optional[AffineCE]:
        for ce in self.predicted:
            if ce.target == target:
                return ce
        return None

    def to_dict(self) -> Dict[str, Any]:
        """Summary without the tensor."""
        return {
            "family": self.family,
            "n": self.n,
            "N": self.N,
            "captured_mass": self.captured_mass,
            **self.metadata,
        }


class BaseFamily(ABC):
    """Base class for all compatible joint families."""

    dimension: int = 2

    def __init__(self, family_type: FamilyType, name: Optional[str] = None):
        """
        Initialize base family.

        Args:
            family_type: Type of the family
            name: Optional display name
        """
        self.family_type = family_type
        self.name = name or family_type.value
        logger.debug(f"Initialized family: {self.name}")

    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        """Resolved parameters, keyed as in the family descriptor."""
        pass

    @abstractmethod
    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        """Per-coordinate means and variances."""
        pass

    @abstractmethod
    def _tensor(self, N: int) -> np.ndarray:
        """Probabilities on {0..N}^n."""
        pass

    @abstractmethod
    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        """Closed-form conditional expectations the family satisfies."""
        pass

    @abstractmethod
    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """
        Draw i.i.d. vectors from the stochastic representation.

        Returns:
            Integer array of shape (count, dimension)
        """
        pass

    def default_bound(self) -> int:
        """ceil(sum of means + 12 * sum of standard deviations)."""
        try:
            means, variances = self.marginal_moments()
        except MomentDivergenceError:
            return settings.truncation_order
        return support_bound(float(np.sum(means)), float(np.sum(np.sqrt(variances))))

    def extra_metadata(self) -> Dict[str, Any]:
        return {}

    def build(self, N: Optional[int] = None, with_ce: bool = True) -> JointPMF:
        """
        Tabulate the family on {0..N}^n.

        Args:
            N: Per-axis support bound (defaults to ``default_bound``)
            with_ce: Attach the predicted conditional expectations

        Returns:
            JointPMF carrying the predicted conditional expectations
        """
        N = self.default_bound() if N is None else int(N)
        if N < 1:
            raise ParameterDomainError(f"Support bound must be positive, got {N}")
        probs = self._tensor(N)
        joint = JointPMF.from_array(
            probs,
            family=self.family_type.value,
            predicted=self.predicted_ce() if with_ce else (),
            metadata={**self.parameters(), **self.extra_metadata()},
        )
        shortfall = 1.0 - joint.captured_mass
        if shortfall > MASS_SHORTFALL_WARNING:
            logger.warning(
                f"{self.name}: truncation at N={N} leaves mass {shortfall:.3e} uncaptured"
            )
        logger.info(f"Built {self.name} on {{0..{N}}}^{self.dimension}, mass={joint.captured_mass:.12f}")
        return joint

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.parameters().items())
        return f"{self.__class__.__name__}({params})"
