"""
Exception hierarchy shared by all countcompat packages.
"""


class CountCompatError(Exception):
    """Base class for every error raised by countcompat."""
    pass


# Series arithmetic
class OrderMismatchError(CountCompatError, ValueError):
    """Two series with different truncation orders were combined."""
    pass


class SingularConstantTermError(CountCompatError, ValueError):
    """A real power was requested of a series with nonpositive constant term."""
    pass


class InvalidPGFError(CountCompatError, ValueError):
    """A series has a coefficient that cannot be a probability."""
    pass


# Distribution / family parameters
class ParameterDomainError(CountCompatError, ValueError):
    """Parameters outside the domain of a law or family."""
    pass


class MomentDivergenceError(CountCompatError, ValueError):
    """A requested moment does not exist."""
    pass


class IncompatibleParametersError(CountCompatError, ValueError):
    """Cross-parameter constraints of a compatible family are violated."""
    pass


class CEUndefinedError(CountCompatError, ValueError):
    """The conditional expectation of a family is not finite."""
    pass


# Compatibility checks
class DomainMismatchError(CountCompatError, ValueError):
    """Conditional pmfs vanish inside the tested grid."""
    pass


class DegenerateSpecError(CountCompatError, ValueError):
    """A conditional specification uses a point-mass thinning law."""
    pass


class UnsupportedLawError(CountCompatError, ValueError):
    """A law outside the catalogue cannot be judged."""
    pass


# Linear conditional expectations
class CorrelationBoundError(CountCompatError, ValueError):
    """Slopes violate ac < 1."""
    pass


class OutOfTheoremScopeError(CountCompatError, ValueError):
    """Slopes outside (0, 1) for the bounded-support construction."""
    pass


class NumericalFailureError(CountCompatError, RuntimeError):
    """Neither a feasible point nor a certificate could be produced."""
    pass


# Oracle
class ConditioningOnNullSetError(CountCompatError, ValueError):
    """Conditioning on a configuration with (numerically) zero mass."""
    pass


class UnderdeterminedFitError(CountCompatError, ValueError):
    """Too few configurations for an affine fit."""
    pass


# Simulation
class DivergenceDetectedError(CountCompatError, RuntimeError):
    """A Gibbs chain left the state-space guard."""
    pass


class InconclusiveDiagnosticError(CountCompatError, RuntimeError):
    """No conditioning value was visited often enough."""
    pass


# CLI
class ConfigSchemaError(CountCompatError, ValueError):
    """A model config file does not follow the schema."""
    pass
