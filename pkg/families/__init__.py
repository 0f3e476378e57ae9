"""
Compatible joint count distributions.
"""

from .base import AffineCE, BaseFamily, FamilyType, JointPMF
from .models import (
    FamilyDescriptor,
    ThetaFamilyParams,
    MarkovChainParams,
    validate_params,
)
from .builders import (
    FAMILY_CLASSES,
    make_family,
    describe_family,
    build_independent,
    build_trivariate_poisson,
    build_poisson_gamma,
    build_theta_family,
    build_trivariate_nb,
    build_beta_nb,
    build_beta_nb_multi,
    build_multinomial_mix,
    build_joint_mix,
    build_markov_chain_xyn,
)
from .convolution import add_common_component, outer_product
from .export import write_joint_pmf_csv

__all__ = [
    "AffineCE",
    "BaseFamily",
    "FamilyType",
    "JointPMF",
    "FamilyDescriptor",
    "ThetaFamilyParams",
    "MarkovChainParams",
    "validate_params",
    "FAMILY_CLASSES",
    "make_family",
    "describe_family",
    "build_independent",
    "build_trivariate_poisson",
    "build_poisson_gamma",
    "build_theta_family",
    "build_trivariate_nb",
    "build_beta_nb",
    "build_beta_nb_multi",
    "build_multinomial_mix",
    "build_joint_mix",
    "build_markov_chain_xyn",
    "add_common_component",
    "outer_product",
    "write_joint_pmf_csv",
]
