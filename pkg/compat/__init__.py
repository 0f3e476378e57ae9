"""
Compatibility deciders for conditional count specifications.
"""

from .models import (
    LinearPoissonSpec,
    CARSpec,
    RandomCoeffSpec,
    CompatVerdict,
    SeparabilityReport,
)
from .separability import separability_check, separability_check_conditionals
from .checkers import (
    check_linear_poisson,
    check_binomial_thinning,
    check_car_structure,
    check_random_coeff,
)

__all__ = [
    "LinearPoissonSpec",
    "CARSpec",
    "RandomCoeffSpec",
    "CompatVerdict",
    "SeparabilityReport",
    "separability_check",
    "separability_check_conditionals",
    "check_linear_poisson",
    "check_binomial_thinning",
    "check_car_structure",
    "check_random_coeff",
]
