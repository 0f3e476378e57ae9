"""
Command results that bundle several artifacts.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from lince import ConditionReport, ThetaDomainReport
from oracle import AffineFitReport, CETable
from simulate import GibbsDiagnostic


@dataclass(frozen=True)
class ClassifyResult:
    """Everything known about a linear conditional expectation spec without solving."""
    conditions: ConditionReport
    theta_domain: Optional[ThetaDomainReport] = None
    relations: Dict[str, bool] = field(default_factory=dict)
    support_bound: Optional[int] = None
    notes: Dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class OracleResult:
    family: str
    table: CETable
    fit: Optional[AffineFitReport] = None
    fit_error: Optional[str] = None


@dataclass(frozen=True)
class SampleBatch:
    family: str
    samples: np.ndarray
    seed: int


@dataclass(frozen=True)
class GibbsResult:
    spec: str
    samples: np.ndarray
    diagnostic: GibbsDiagnostic
    seed: int
