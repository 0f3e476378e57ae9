"""
Poisson-based families: independent laws, trivariate Poisson reduction and
Poisson-gamma conjugacy.
"""

from typing import Any, Dict, List, Sequence, Tuple
import logging

import numpy as np
from scipy.special import gammaln

from config.exceptions import MomentDivergenceError
from distributions import (
    Poisson,
    distribution_from_dict,
    draw,
    mean_of,
    natural_bound,
    pmf_vector,
    variance_of,
)
from .base import AffineCE, BaseFamily, FamilyType
from .convolution import add_common_component, outer_product
from .models import PoissonGammaParams, TrivariatePoissonParams, validate_params


logger = logging.getLogger(__name__)


class IndependentFamily(BaseFamily):
    """Product of independent catalogue laws."""

    def __init__(self, laws: Sequence[Any]):
        super().__init__(FamilyType.INDEPENDENT)
        self.laws = [distribution_from_dict(law) if isinstance(law, dict) else law for law in laws]
        if len(self.laws) < 2:
            raise ValueError("An independent family needs at least two laws")
        self.dimension = len(self.laws)

    def parameters(self) -> Dict[str, Any]:
        return {"laws": [law.model_dump(by_alias=True) for law in self.laws]}

    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        return (
            np.array([mean_of(law) for law in self.laws]),
            np.array([variance_of(law) for law in self.laws]),
        )

    def default_bound(self) -> int:
        return max(natural_bound(law) for law in self.laws)

    def _tensor(self, N: int) -> np.ndarray:
        return outer_product([pmf_vector(law, N) for law in self.laws])

    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        zeros = tuple(0.0 for _ in range(self.dimension - 1))
        try:
            return tuple(AffineCE(i, zeros, mean_of(law)) for i, law in enumerate(self.laws))
        except MomentDivergenceError:
            return ()

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return np.column_stack([draw(law, count, rng) for law in self.laws])


class TrivariatePoissonFamily(BaseFamily):
    """
    X = Z0 + Z1, Y = Z0 + Z2 with Z_k ~ Poisson(lambda_k) independent.

    Conditionals are binomial thinnings plus Poisson innovations:
    E[X|Y] = alpha Y + lambda1 with alpha = lambda0 / (lambda0 + lambda2), and
    E[Y|X] = beta X + lambda2 with beta = lambda0 / (lambda0 + lambda1).
    """

    def __init__(self, lambda0: float, lambda1: float, lambda2: float):
        super().__init__(FamilyType.TRIVARIATE_POISSON)
        self.params = validate_params(
            TrivariatePoissonParams, lambda0=lambda0, lambda1=lambda1, lambda2=lambda2
        )

    @property
    def alpha(self) -> float:
        p = self.params
        return p.lambda0 / (p.lambda0 + p.lambda2)

    @property
    def beta(self) -> float:
        p = self.params
        return p.lambda0 / (p.lambda0 + p.lambda1)

    def parameters(self) -> Dict[str, Any]:
        return self.params.model_dump()

    def extra_metadata(self) -> Dict[str, Any]:
        p = self.params
        alpha, beta = self.alpha, self.beta
        return {
            "alpha": alpha,
            "beta": beta,
            "balance": alpha / (p.lambda1 * (1.0 - alpha)),
            "lambda_x": (alpha * p.lambda2 + p.lambda1) / (1.0 - alpha * beta),
            "lambda_y": (beta * p.lambda1 + p.lambda2) / (1.0 - alpha * beta),
        }

    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        p = self.params
        means = np.array([p.lambda0 + p.lambda1, p.lambda0 + p.lambda2])
        return means, means.copy()

    def _tensor(self, N: int) -> np.ndarray:
        p = self.params
        base = outer_product([
            pmf_vector(Poisson(lam=p.lambda1), N),
            pmf_vector(Poisson(lam=p.lambda2), N),
        ])
        return add_common_component(base, pmf_vector(Poisson(lam=p.lambda0), N), (0, 1))

    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        p = self.params
        return (
            AffineCE(0, (self.alpha,), p.lambda1),
            AffineCE(1, (self.beta,), p.lambda2),
        )

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        z0 = rng.poisson(p.lambda0, count)
        return np.column_stack([
            z0 + rng.poisson(p.lambda1, count),
            z0 + rng.poisson(p.lambda2, count),
        ])


class PoissonGammaFamily(BaseFamily):
    """
    X_i | U ~ Poisson(lambda_i U) independent, U ~ Gamma(alpha, rate beta).

    The joint law is negative multinomial and
    E[X_i | rest] = lambda_i (alpha + sum_{j != i} X_j) / (beta + sum_{j != i} lambda_j).
    """

    def __init__(self, alpha: float, beta: float, lambdas: Sequence[float]):
        super().__init__(FamilyType.POISSON_GAMMA)
        self.params = validate_params(
            PoissonGammaParams, alpha=alpha, beta=beta, lambdas=list(lambdas)
        )
        self.dimension = len(self.params.lambdas)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array(self.params.lambdas, dtype=float)

    def parameters(self) -> Dict[str, Any]:
        return self.params.model_dump()

    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        p = self.params
        lam = self.lambdas
        means = lam * p.alpha / p.beta
        return means, means + lam ** 2 * p.alpha / p.beta ** 2

    def _tensor(self, N: int) -> np.ndarray:
        p = self.params
        lam = self.lambdas
        grid = np.arange(N + 1, dtype=float)
        total = np.zeros((N + 1,) * self.dimension)
        log_p = np.zeros_like(total)
        for axis, rate in enumerate(lam):
            shape = [1] * self.dimension
            shape[axis] = N + 1
            x = grid.reshape(shape)
            total = total + x
            if rate > 0:
                term = x * np.log(rate) - gammaln(x + 1)
            else:
                # a zero rate pins the coordinate at 0
                term = np.where(x == 0, 0.0, -np.inf)
            log_p = log_p + term
        log_p += (
            gammaln(p.alpha + total) - gammaln(p.alpha)
            + p.alpha * np.log(p.beta)
            - (p.alpha + total) * np.log(p.beta + lam.sum())
        )
        return np.exp(log_p)

    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        p = self.params
        lam = self.lambdas
        out = []
        for i in range(self.dimension):
            denominator = p.beta + lam.sum() - lam[i]
            slope = lam[i] / denominator
            out.append(AffineCE(i, tuple(slope for _ in range(self.dimension - 1)), slope * p.alpha))
        return tuple(out)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        u = rng.gamma(p.alpha, 1.0 / p.beta, count)
        return np.column_stack([rng.poisson(rate * u) for rate in self.lambdas])

    def posterior_parameters(self, given: List[int], target: int) -> Tuple[float, float]:
        """NB (successes, probability) of X_target given the other coordinates."""
        p = self.params
        lam = self.lambdas
        others = lam.sum() - lam[target]
        return p.alpha + float(sum(given)), (p.beta + others) / (p.beta + lam.sum())
