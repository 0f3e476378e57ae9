"""
Brute-force ground truth over joint probability tensors.
"""

from .models import AffineFitReport, CETable
from .conditional import (
    conditional_pmf,
    conditional_expectation,
    affine_deviation,
    affine_residual,
    moments,
    correlation_squared,
    moment_slopes,
    write_ce_table_csv,
)
from .counterexamples import (
    build_pairwise_common_model,
    build_common_triple_model,
    common_triple_pairwise_ce,
)

__all__ = [
    "AffineFitReport",
    "CETable",
    "conditional_pmf",
    "conditional_expectation",
    "affine_deviation",
    "affine_residual",
    "moments",
    "correlation_squared",
    "moment_slopes",
    "write_ce_table_csv",
    "build_pairwise_common_model",
    "build_common_triple_model",
    "common_triple_pairwise_ce",
]
