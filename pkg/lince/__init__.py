"""
Linear conditional expectations: necessary conditions, ThetaRatio/NB
coverage and bounded-support feasibility.
"""

from .models import (
    LinearCESpec,
    FarkasCertificate,
    ConditionReport,
    ThetaDomainReport,
    LPSystem,
)
from .conditions import (
    OUTSIDE,
    principal_minors,
    necessary_conditions,
    classify_theta_domain,
    choose_support_bound,
    coefficient_relations,
)
from .simplex import PhaseOneResult, phase_one
from .feasibility import (
    LP_FAMILY,
    build_lp_system,
    build_lp_system_general,
    solve_feasibility,
    solve_feasibility_experimental,
    verify_certificate,
    certificate_margin_of,
    write_certificate_csv,
)

__all__ = [
    "LinearCESpec",
    "FarkasCertificate",
    "ConditionReport",
    "ThetaDomainReport",
    "LPSystem",
    "OUTSIDE",
    "principal_minors",
    "necessary_conditions",
    "classify_theta_domain",
    "choose_support_bound",
    "coefficient_relations",
    "PhaseOneResult",
    "phase_one",
    "LP_FAMILY",
    "build_lp_system",
    "build_lp_system_general",
    "solve_feasibility",
    "solve_feasibility_experimental",
    "verify_certificate",
    "certificate_margin_of",
    "write_certificate_csv",
]
