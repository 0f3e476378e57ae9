"""
Bivariate family with ThetaRatio thinnings and negative-binomial innovations.
"""

from typing import Any, Dict, Tuple
import logging

import numpy as np

from config import settings
from distributions import NegBinomial, ThetaRatio, compound_sum, natural_bound
from series import BivariateSeries, bivariate_pgf_to_pmf, bivariate_real_power
from .base import AffineCE, BaseFamily, FamilyType
from .models import ThetaFamilyParams


logger = logging.getLogger(__name__)


class ThetaFamily(BaseFamily):
    """
    Joint pgf [1 + A(1-u) + B(1-v) + C(1-u)(1-v)]^(-delta).

    X | Y is a sum of Y ThetaRatio(theta2, theta1) variables plus an
    NB(delta, 1/(1+theta1)) innovation; symmetrically for Y | X with
    (theta4, theta3). Both marginals are negative binomial.
    """

    def __init__(self, params: ThetaFamilyParams, method: str = "recurrence"):
        super().__init__(FamilyType.THETA)
        self.params = params.check_constraints()
        self.method = method

    def pgf_coefficients(self) -> Tuple[float, float, float]:
        """(A, B, C) of the joint pgf."""
        p = self.params
        det = 1.0 - p.slope_x * p.slope_y
        a = (p.theta1 + p.theta3 * p.slope_x) / det
        b = (p.theta3 + p.theta1 * p.slope_y) / det
        return a, b, p.theta4 * a

    def marginal_laws(self) -> Tuple[NegBinomial, NegBinomial]:
        a, b, _ = self.pgf_coefficients()
        delta = self.params.delta
        return NegBinomial(r=delta, p=1.0 / (1.0 + a)), NegBinomial(r=delta, p=1.0 / (1.0 + b))

    def parameters(self) -> Dict[str, Any]:
        return self.params.model_dump()

    def extra_metadata(self) -> Dict[str, Any]:
        a, b, c = self.pgf_coefficients()
        return {"A": a, "B": b, "C": c, "sameproduct_residual": self.params.sameproduct_residual()}

    def marginal_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        a, b, _ = self.pgf_coefficients()
        scale = np.array([a, b])
        delta = self.params.delta
        return delta * scale, delta * scale * (1.0 + scale)

    def default_bound(self) -> int:
        """Smallest doubling of mean + 12 sd leaving at most ``theta_bound_tail`` in each marginal."""
        return max(natural_bound(law, tail=settings.theta_bound_tail) for law in self.marginal_laws())

    def _tensor(self, N: int) -> np.ndarray:
        a, b, c = self.pgf_coefficients()
        # rows are powers of u, columns powers of v
        polynomial = [[1.0 + a + b + c, -b - c], [-a - c, c]]
        base = BivariateSeries.from_polynomial(polynomial, N)
        powered = bivariate_real_power(base, -self.params.delta, method=self.method)
        pmf = bivariate_pgf_to_pmf(powered)
        if pmf.clamped:
            logger.debug(f"{pmf.clamped} pgf coefficients clamped")
        return np.array(pmf.probs)

    def predicted_ce(self) -> Tuple[AffineCE, ...]:
        p = self.params
        return (
            AffineCE(0, (p.slope_x,), p.delta * p.theta1),
            AffineCE(1, (p.slope_y,), p.delta * p.theta3),
        )

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        _, law_y = self.marginal_laws()
        y = rng.negative_binomial(law_y.r, law_y.p, count)
        thinning = ThetaRatio(theta_num=p.theta2, theta_den=p.theta1)
        innovation = rng.negative_binomial(p.delta, 1.0 / (1.0 + p.theta1), count)
        x = compound_sum(thinning, y, rng) + innovation
        return np.column_stack([x, y])
