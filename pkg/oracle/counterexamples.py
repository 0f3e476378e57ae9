"""
Three-dimensional common-component models whose conditional expectations
are not linear.

Pairwise model:  X1 = W1 + W12 + W13, X2 = W2 + W12 + W23, X3 = W3 + W13 + W23.
Triple model:    Xi = Wi + W123.

Components are independent Poisson(rate), or NB(rate, p) sharing one p.
"""

from typing import Dict, Sequence, Tuple
import logging

import numpy as np

from config.exceptions import ParameterDomainError
from distributions import make_distribution, pmf_vector
from families import JointPMF, add_common_component, outer_product


logger = logging.getLogger(__name__)

COMPONENT_LAWS = ("poisson", "negbinomial")

PAIRWISE_AXES = ((0, 1), (0, 2), (1, 2))


def _component_pmf(rate: float, law: str, p: float, N: int) -> np.ndarray:
    if rate < 0:
        raise ParameterDomainError(f"Component rates must be nonnegative, got {rate}")
    if rate == 0:
        return pmf_vector(make_distribution("degenerate", k=0), N)
    if law == "poisson":
        return pmf_vector(make_distribution("poisson", lam=rate), N)
    if law == "negbinomial":
        return pmf_vector(make_distribution("negbinomial", r=rate, p=p), N)
    raise ParameterDomainError(f"Component law must be one of {COMPONENT_LAWS}, got '{law}'")


def _check_rates(rates: Sequence[float], expected: int, name: str) -> Tuple[float, ...]:
    rates = tuple(float(r) for r in rates)
    if len(rates) != expected:
        raise ParameterDomainError(f"{name} needs {expected} rates, got {len(rates)}")
    return rates


def build_pairwise_common_model(
    rates: Sequence[float],
    law: str = "poisson",
    p: float = 0.5,
    N: int = 25
) -> JointPMF:
    """
    Joint pmf of the pairwise common-component model on {0..N}^3.

    Args:
        rates: (w1, w2, w3, w12, w13, w23)
        law: "poisson" or "negbinomial"
        p: Shared NB probability (ignored for Poisson)
        N: Per-axis bound

    Returns:
        JointPMF with no predicted conditional expectations
    """
    w1, w2, w3, w12, w13, w23 = _check_rates(rates, 6, "Pairwise model")
    tensor = outer_product([_component_pmf(r, law, p, N) for r in (w1, w2, w3)])
    for rate, axes in zip((w12, w13, w23), PAIRWISE_AXES):
        tensor = add_common_component(tensor, _component_pmf(rate, law, p, N), axes)
    joint = JointPMF.from_array(
        tensor,
        family="pairwise_common",
        metadata={"law": law, "rates": list(rates), "p": p if law == "negbinomial" else None},
    )
    logger.info(f"Built pairwise common-component model ({law}) on {{0..{N}}}^3, mass={joint.captured_mass:.12f}")
    return joint


def build_common_triple_model(
    rates: Sequence[float],
    law: str = "poisson",
    p: float = 0.5,
    N: int = 25
) -> JointPMF:
    """
    Joint pmf of Xi = Wi + W123 on {0..N}^3.

    Args:
        rates: (w1, w2, w3, w123)
    """
    w1, w2, w3, w123 = _check_rates(rates, 4, "Triple model")
    tensor = outer_product([_component_pmf(r, law, p, N) for r in (w1, w2, w3)])
    tensor = add_common_component(tensor, _component_pmf(w123, law, p, N), (0, 1, 2))
    joint = JointPMF.from_array(
        tensor,
        family="common_triple",
        metadata={"law": law, "rates": list(rates), "p": p if law == "negbinomial" else None},
    )
    logger.info(f"Built common-triple model ({law}) on {{0..{N}}}^3, mass={joint.captured_mass:.12f}")
    return joint


def common_triple_pairwise_ce(
    rates: Sequence[float],
    law: str = "poisson",
    p: float = 0.5
) -> Dict[Tuple[int, int], Tuple[float, float]]:
    """
    Slope and intercept of E[Xi | Xk] in the triple model, keyed (i, k).

    The pair (Xi, Xk) is a bivariate common-component law, so
    E[Xi | Xk = x] = x w123 / (w123 + wk) + E[Wi].
    """
    w = _check_rates(rates, 4, "Triple model")
    common = w[3]
    means = [r if law == "poisson" else r * (1.0 - p) / p for r in w[:3]]
    out = {}
    for i in range(3):
        for k in range(3):
            if i != k:
                out[(i, k)] = (common / (common + w[k]), means[i])
    return out
