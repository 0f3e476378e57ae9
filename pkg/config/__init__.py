"""
Settings and the countcompat error hierarchy.
"""

from .settings import settings, Settings
from .exceptions import (
    CountCompatError,
    OrderMismatchError,
    SingularConstantTermError,
    InvalidPGFError,
    ParameterDomainError,
    MomentDivergenceError,
    IncompatibleParametersError,
    CEUndefinedError,
    DomainMismatchError,
    DegenerateSpecError,
    UnsupportedLawError,
    CorrelationBoundError,
    OutOfTheoremScopeError,
    NumericalFailureError,
    ConditioningOnNullSetError,
    UnderdeterminedFitError,
    DivergenceDetectedError,
    InconclusiveDiagnosticError,
    ConfigSchemaError,
)

__all__ = [
    "settings",
    "Settings",
    "CountCompatError",
    "OrderMismatchError",
    "SingularConstantTermError",
    "InvalidPGFError",
    "ParameterDomainError",
    "MomentDivergenceError",
    "IncompatibleParametersError",
    "CEUndefinedError",
    "DomainMismatchError",
    "DegenerateSpecError",
    "UnsupportedLawError",
    "CorrelationBoundError",
    "OutOfTheoremScopeError",
    "NumericalFailureError",
    "ConditioningOnNullSetError",
    "UnderdeterminedFitError",
    "DivergenceDetectedError",
    "InconclusiveDiagnosticError",
    "ConfigSchemaError",
]
