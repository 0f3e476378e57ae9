"""
Exact samplers and Gibbs sampling over conditional specifications.
"""

from .rng import make_generator
from .samplers import sample_family, empirical_pmf, total_variation, write_samples_csv
from .gibbs import (
    GibbsDiagnostic,
    check_diagnostic_target,
    gibbs_run,
    gibbs_compat_diagnostic,
    conditional_mean_discrepancy,
    postulated_mean,
)

__all__ = [
    "make_generator",
    "sample_family",
    "empirical_pmf",
    "total_variation",
    "write_samples_csv",
    "GibbsDiagnostic",
    "check_diagnostic_target",
    "gibbs_run",
    "gibbs_compat_diagnostic",
    "conditional_mean_discrepancy",
    "postulated_mean",
]
