"""
Constructors for every compatible joint family, plus descriptor dispatch.
"""

from typing import Any, Dict, Optional, Sequence, Type
import logging

from config.exceptions import ParameterDomainError
from .base import BaseFamily, FamilyType, JointPMF
from .models import FamilyDescriptor, MarkovChainParams, ThetaFamilyParams, validate_params
from .multinomial import JointMixFamily, MultinomialMixFamily
from .negbinomial import BetaNBFamily, MarkovChainFamily, TrivariateNBFamily
from .poisson import IndependentFamily, PoissonGammaFamily, TrivariatePoissonFamily
from .theta import ThetaFamily


logger = logging.getLogger(__name__)


FAMILY_CLASSES: Dict[FamilyType, Type[BaseFamily]] = {
    FamilyType.INDEPENDENT: IndependentFamily,
    FamilyType.TRIVARIATE_POISSON: TrivariatePoissonFamily,
    FamilyType.POISSON_GAMMA: PoissonGammaFamily,
    FamilyType.THETA: ThetaFamily,
    FamilyType.TRIVARIATE_NB: TrivariateNBFamily,
    FamilyType.BETA_NB: BetaNBFamily,
    FamilyType.MULTINOMIAL_MIX: MultinomialMixFamily,
    FamilyType.JOINT_MIX: JointMixFamily,
    FamilyType.MARKOV_CHAIN: MarkovChainFamily,
}


def make_family(descriptor: FamilyDescriptor) -> BaseFamily:
    """
    Instantiate the family a descriptor names.
    
    Args:
        descriptor: Family tag and parameters
        
    Returns:
        Concrete BaseFamily
    """
    params: Dict[str, Any] = dict(descriptor.params)
    family = descriptor.family
    try:
        if family is FamilyType.THETA:
            return ThetaFamily(validate_params(ThetaFamilyParams, **params))
        if family is FamilyType.MARKOV_CHAIN:
            return MarkovChainFamily(validate_params(MarkovChainParams, **params))
        return FAMILY_CLASSES[family](**params)
    except TypeError as e:
        raise ParameterDomainError(f"Bad parameters for {family.value}: {e}") from e


def describe_family(family: BaseFamily) -> FamilyDescriptor:
    return FamilyDescriptor(family=family.family_type, params=family.parameters())


def build_independent(laws: Sequence[Any], N: Optional[int] = None) -> JointPMF:
    return IndependentFamily(laws).build(N)


def build_trivariate_poisson(
    lambda0: float,
    lambda1: float,
    lambda2: float,
    N: Optional[int] = None
) -> JointPMF:
    """
    Trivariate Poisson reduction (Z0 + Z1, Z0 + Z2).
    
    Args:
        lambda0: Rate of the common component
        lambda1: Rate of the X-only component
        lambda2: Rate of the Y-only component
        N: Support bound
        
    Returns:
        JointPMF with metadata alpha, beta, the balance value and the
        marginal rates lambda_x, lambda_y
    """
    return TrivariatePoissonFamily(lambda0, lambda1, lambda2).build(N)


def build_poisson_gamma(
    alpha: float,
    beta: float,
    lambdas: Sequence[float],
    N: Optional[int] = None
) -> JointPMF:
    """
    Negative multinomial law of Poisson counts sharing a gamma factor.
    
    Args:
        alpha: Gamma shape
        beta: Gamma rate
        lambdas: Per-coordinate Poisson rates (n >= 2; zero pins a coordinate at 0)
        N: Support bound
    """
    return PoissonGammaFamily(alpha, beta, lambdas).build(N)


def build_theta_family(
    p: ThetaFamilyParams,
    N: Optional[int] = None,
    method: str = "recurrence"
) -> JointPMF:
    """
    Bivariate ThetaRatio/NB family from its joint pgf.
    
    Raises:
        IncompatibleParametersError: If a cross constraint is violated
    """
    return ThetaFamily(p, method=method).build(N)


def build_trivariate_nb(
    alpha: float,
    beta1: float,
    beta2: float,
    theta: float,
    N: Optional[int] = None
) -> JointPMF:
    """Trivariate NB reduction with common probability theta."""
    return TrivariateNBFamily(alpha, beta1, beta2, theta).build(N)


def build_beta_nb(
    r1: float,
    r2: float,
    alpha1: float,
    alpha2: float,
    N: Optional[int] = None,
    with_ce: bool = True
) -> JointPMF:
    """
    Bivariate beta-NB conjugate family.
    
    Raises:
        CEUndefinedError: If with_ce and alpha1 + min(r1, r2) <= 1
    """
    return build_beta_nb_multi([r1, r2], alpha1, alpha2, N, with_ce=with_ce)


def build_beta_nb_multi(
    rs: Sequence[float],
    alpha1: float,
    alpha2: float,
    N: Optional[int] = None,
    with_ce: bool = True
) -> JointPMF:
    """n-dimensional beta-NB conjugate family."""
    return BetaNBFamily(rs, alpha1, alpha2).build(N, with_ce=with_ce)


def build_multinomial_mix(size: int, p1: float, p2: float, p3: float) -> JointPMF:
    """(Z1, Z1 + Z3) of a three-cell multinomial; exact on {0..size}^2."""
    return MultinomialMixFamily(size, p1, p2, p3).build()


def build_joint_mix(size: int, p1: float, p2: float, p3: float) -> JointPMF:
    """Full multinomial tensor (Z1, Z2, Z3); exact on {0..size}^3."""
    return JointMixFamily(size, p1, p2, p3).build()


def build_markov_chain_xyn(p: MarkovChainParams, N: Optional[int] = None) -> JointPMF:
    """3-d pmf p(x, n, y) of the chain N -> (X, Y)."""
    return MarkovChainFamily(p).build(N)
