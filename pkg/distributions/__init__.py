"""
Count-distribution catalogue.
"""

from .models import (
    CountDistribution,
    Poisson,
    NegBinomial,
    Geometric,
    Bernoulli,
    ThetaRatio,
    BetaNB,
    Degenerate,
    LAW_TYPES,
    make_distribution,
    distribution_from_dict,
)
from .catalogue import (
    pmf_eval,
    pmf_vector,
    pgf_series_of,
    mean_of,
    variance_of,
    natural_bound,
    support_bound,
    log_nb_coefficient,
    as_negbinomial,
    theta_ratio_components,
    ThetaRatioComponents,
)
from .sampling import draw, compound_sum

__all__ = [
    "CountDistribution",
    "Poisson",
    "NegBinomial",
    "Geometric",
    "Bernoulli",
    "ThetaRatio",
    "BetaNB",
    "Degenerate",
    "LAW_TYPES",
    "make_distribution",
    "distribution_from_dict",
    "pmf_eval",
    "pmf_vector",
    "pgf_series_of",
    "mean_of",
    "variance_of",
    "natural_bound",
    "support_bound",
    "log_nb_coefficient",
    "as_negbinomial",
    "theta_ratio_components",
    "ThetaRatioComponents",
    "draw",
    "compound_sum",
]
