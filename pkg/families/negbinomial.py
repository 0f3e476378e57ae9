"""
Negative-binomial families: trivariate NB reduction, beta-NB conjugacy and the
N -> (X, Y) chain.
"""

from typing import Any, Dict, Sequence, Tuple
import logging

import numpy as np
from scipy.special import betaln

from config.exceptions import CEUndefinedError
from distributions import BetaNB, NegBinomial, log_nb_coefficient, mean_of, pmf_vector, variance_of
from .base import AffineCE, BaseFamily, FamilyType
from .convolution import add_common_component, outer_product
from .models import BetaNBParams, MarkovChainParams, TrivariateNBParams, validate_params


logger = logging.getLogger(__name__)


def _nb_log_pmf(k, r, p):
    return log_nb_coefficient(k, r) + r * np.log(p) + k * np.log1p(-p)


class TrivariateNBFamily(BaseFamily):
    """
    X = Z + E1, Y = Z + E2 with Z ~ NB(alpha, theta), E_i ~ NB(beta_i, theta).

    E[X|Y] = alpha / (alpha + beta2) Y + beta1 (1 - theta) / theta.
    """

    def __init__(self, alpha: float, beta1: float, beta2: float, theta: float):
        super().__init__(FamilyType.TRIVARIATE_NB)
        self.params = validate_params(
            TrivariateNBParams, alpha=alpha, beta1=beta1, beta2=beta2, theta=theta
        )

    @property
    def odds(self) -> float:
        return (1.0 - self.params.theta) / self.params.theta

    def parameters(self) -> Dict[str, Any]:
        return self.params.model_dump()

    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        p = self.params
        successes = np.array([p.alpha + p.beta1, p.alpha + p.beta2])
        return successes * self.odds, successes * self.odds / p.theta

    def _tensor(self, N: int) -> np.ndarray:
        p = self.params
        base = outer_product([
            pmf_vector(NegBinomial(r=p.beta1, p=p.theta), N),
            pmf_vector(NegBinomial(r=p.beta2, p=p.theta), N),
        ])
        return add_common_component(base, pmf_vector(NegBinomial(r=p.alpha, p=p.theta), N), (0, 1))

    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        p = self.params
        return (
            AffineCE(0, (p.alpha / (p.alpha + p.beta2),), p.beta1 * self.odds),
            AffineCE(1, (p.alpha / (p.alpha + p.beta1),), p.beta2 * self.odds),
        )

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        z = rng.negative_binomial(p.alpha, p.theta, count)
        return np.column_stack([
            z + rng.negative_binomial(p.beta1, p.theta, count),
            z + rng.negative_binomial(p.beta2, p.theta, count),
        ])


class BetaNBFamily(BaseFamily):
    """
    X_i | U ~ NB(r_i, U) independent, U ~ Beta(alpha1, alpha2).

    E[X_i | rest] = r_i (alpha2 + sum_{j != i} X_j) / (alpha1 + sum_{j != i} r_j - 1),
    finite only when alpha1 + sum_{j != i} r_j > 1.
    """

    def __init__(self, rs: Sequence[float], alpha1: float, alpha2: float):
        super().__init__(FamilyType.BETA_NB)
        self.params = validate_params(BetaNBParams, rs=list(rs), alpha1=alpha1, alpha2=alpha2)
        self.dimension = len(self.params.rs)

    def parameters(self) -> Dict[str, Any]:
        return self.params.model_dump()

    def marginal_law(self, i: int) -> BetaNB:
        p = self.params
        return BetaNB(r=p.rs[i], alpha1=p.alpha1, alpha2=p.alpha2)

    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        laws = [self.marginal_law(i) for i in range(self.dimension)]
        return np.array([mean_of(law) for law in laws]), np.array([variance_of(law) for law in laws])

    def _tensor(self, N: int) -> np.ndarray:
        p = self.params
        grid = np.arange(N + 1, dtype=float)
        total = np.zeros((N + 1,) * self.dimension)
        log_p = np.zeros_like(total)
        for axis, r in enumerate(p.rs):
            shape = [1] * self.dimension
            shape[axis] = N + 1
            x = grid.reshape(shape)
            total = total + x
            log_p = log_p + log_nb_coefficient(x, r)
        log_p += betaln(p.alpha1 + sum(p.rs), p.alpha2 + total) - betaln(p.alpha1, p.alpha2)
        return np.exp(log_p)

    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        """
        Raises:
            CEUndefinedError: If some conditional expectation is infinite
        """
        p = self.params
        out = []
        for i, r in enumerate(p.rs):
            denominator = p.alpha1 + sum(p.rs) - r - 1.0
            if denominator <= 0:
                raise CEUndefinedError(
                    f"E[X_{i}|rest] is infinite: alpha1 + sum of other r = {denominator + 1.0:g} <= 1"
                )
            slope = r / denominator
            out.append(AffineCE(i, tuple(slope for _ in range(self.dimension - 1)), slope * p.alpha2))
        return tuple(out)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        u = np.clip(rng.beta(p.alpha1, p.alpha2, count), 1e-300, 1.0)
        return np.column_stack([rng.negative_binomial(r, u) for r in p.rs])


class MarkovChainFamily(BaseFamily):
    """
    Chain N -> (X, Y): N ~ NB(delta, p0), X | N ~ NB(delta + N, p1),
    Y | N ~ NB(delta + N, p2), X and Y independent given N.

    Coordinates are ordered (X, N, Y).
    """

    dimension = 3

    def __init__(self, params: MarkovChainParams):
        super().__init__(FamilyType.MARKOV_CHAIN)
        self.params = params

    def parameters(self) -> Dict[str, Any]:
        return self.params.model_dump()

    def extra_metadata(self) -> Dict[str, Any]:
        p = self.params
        q = (1.0 - p.p0) * p.p1 * p.p2
        return {"mean_n_given_zero": p.delta * q / (1.0 - q)}

    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        p = self.params
        odds = [(1.0 - prob) / prob for prob in (p.p0, p.p1, p.p2)]
        mean_n = p.delta * odds[0]
        var_n = mean_n / p.p0
        means, variances = [], []
        for odd, prob in ((odds[1], p.p1), (odds[2], p.p2)):
            means.append((p.delta + mean_n) * odd)
            variances.append((p.delta + mean_n) * odd / prob + odd ** 2 * var_n)
        return (
            np.array([means[0], mean_n, means[1]]),
            np.array([variances[0], var_n, variances[1]]),
        )

    def _tensor(self, N: int) -> np.ndarray:
        p = self.params
        k = np.arange(N + 1, dtype=float)
        p_n = np.exp(_nb_log_pmf(k, p.delta, p.p0))
        successes = p.delta + k[None, :]
        p_x = np.exp(_nb_log_pmf(k[:, None], successes, p.p1))
        p_y = np.exp(_nb_log_pmf(k[:, None], successes, p.p2))
        return np.einsum("n,xn,yn->xny", p_n, p_x, p_y)

    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        # E[N | X, Y] is not affine
        p = self.params
        odds1 = (1.0 - p.p1) / p.p1
        odds2 = (1.0 - p.p2) / p.p2
        return (
            AffineCE(0, (odds1, 0.0), p.delta * odds1),
            AffineCE(2, (0.0, odds2), p.delta * odds2),
        )

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        n = rng.negative_binomial(p.delta, p.p0, count)
        return np.column_stack([
            rng.negative_binomial(p.delta + n, p.p1),
            n,
            rng.negative_binomial(p.delta + n, p.p2),
        ])
