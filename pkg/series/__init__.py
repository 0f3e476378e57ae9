"""
Truncated power series and pgf/pmf conversion.
"""

from .pgf import (
    TruncatedSeries,
    BivariateSeries,
    PMFSequence,
    series_mul,
    series_real_power,
    bivariate_real_power,
    pgf_to_pmf,
    bivariate_pgf_to_pmf,
)

__all__ = [
    "TruncatedSeries",
    "BivariateSeries",
    "PMFSequence",
    "series_mul",
    "series_real_power",
    "bivariate_real_power",
    "pgf_to_pmf",
    "bivariate_pgf_to_pmf",
]
