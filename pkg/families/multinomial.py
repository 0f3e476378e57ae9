"""
Bounded-support families built on the multinomial law.
"""

from typing import Any, Dict, Tuple

import numpy as np
from scipy.special import gammaln

from .base import AffineCE, BaseFamily, FamilyType
from .models import MultinomialParams, validate_params


def _multinomial_log_pmf(size: int, counts, probs) -> np.ndarray:
    log_p = gammaln(size + 1.0)
    for z, prob in zip(counts, probs):
        log_p = log_p - gammaln(z + 1.0) + z * np.log(prob)
    return log_p


class _MultinomialBase(BaseFamily):

    def __init__(self, family_type: FamilyType, size: int, p1: float, p2: float, p3: float):
        super().__init__(family_type)
        self.params = validate_params(MultinomialParams, size=size, p1=p1, p2=p2, p3=p3)

    def parameters(self) -> Dict[str, Any]:
        return self.params.model_dump()

    def default_bound(self) -> int:
        return self.params.size


class MultinomialMixFamily(_MultinomialBase):
    """
    (X, Y) = (Z1, Z1 + Z3) for (Z1, Z2, Z3) ~ Multinomial(size; p1, p2, p3).

    E[X|Y] = p1 / (p1 + p3) Y and E[Y|X] = p2 / (p2 + p3) X + size p3 / (p2 + p3).
    """

    def __init__(self, size: int, p1: float, p2: float, p3: float):
        super().__init__(FamilyType.MULTINOMIAL_MIX, size, p1, p2, p3)

    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        p = self.params
        probs = np.array([p.p1, p.p1 + p.p3])
        return p.size * probs, p.size * probs * (1.0 - probs)

    def _tensor(self, N: int) -> np.ndarray:
        p = self.params
        m = p.size
        x = np.arange(N + 1, dtype=float)[:, None]
        y = np.arange(N + 1, dtype=float)[None, :]
        valid = (y >= x) & (y <= m)
        z1 = np.where(valid, x, 0.0)
        z3 = np.where(valid, y - x, 0.0)
        z2 = np.where(valid, m - y, 0.0)
        log_p = _multinomial_log_pmf(m, (z1, z2, z3), p.probs)
        return np.where(valid, np.exp(log_p), 0.0)

    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        p = self.params
        return (
            AffineCE(0, (p.p1 / (p.p1 + p.p3),), 0.0),
            AffineCE(1, (p.p2 / (p.p2 + p.p3),), p.size * p.p3 / (p.p2 + p.p3)),
        )

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        z = rng.multinomial(p.size, p.probs, count)
        return np.column_stack([z[:, 0], z[:, 0] + z[:, 2]])


class JointMixFamily(_MultinomialBase):
    """
    (Z1, Z2, Z3) ~ Multinomial(size; p1, p2, p3): Z1 + Z2 + Z3 = size almost surely,
    so every regression slope equals -1.
    """

    dimension = 3

    def __init__(self, size: int, p1: float, p2: float, p3: float):
        super().__init__(FamilyType.JOINT_MIX, size, p1, p2, p3)

    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        p = self.params
        probs = np.array(p.probs)
        return p.size * probs, p.size * probs * (1.0 - probs)

    def _tensor(self, N: int) -> np.ndarray:
        p = self.params
        grid = np.arange(N + 1, dtype=float)
        z1, z2, z3 = grid[:, None, None], grid[None, :, None], grid[None, None, :]
        valid = (z1 + z2 + z3) == p.size
        log_p = _multinomial_log_pmf(p.size, (z1, z2, z3), p.probs)
        return np.where(valid, np.exp(np.where(valid, log_p, 0.0)), 0.0)

    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        size = float(self.params.size)
        return tuple(AffineCE(i, (-1.0, -1.0), size) for i in range(3))

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        return rng.multinomial(p.size, p.probs, count)
