"""
Subcommand implementations. Each takes the parsed config and CLI options and
returns a result object for ``emit_report``.
"""

from typing import Optional
import logging

from compat import (
    CARSpec,
    LinearPoissonSpec,
    RandomCoeffSpec,
    CompatVerdict,
    check_car_structure,
    check_linear_poisson,
    check_random_coeff,
)
from config import settings
from config.exceptions import (
    ConfigSchemaError,
    CountCompatError,
    OutOfTheoremScopeError,
    UnderdeterminedFitError,
)
from families import FamilyDescriptor, JointPMF, make_family
from lince import (
    LinearCESpec,
    choose_support_bound,
    classify_theta_domain,
    coefficient_relations,
    necessary_conditions,
    solve_feasibility,
    solve_feasibility_experimental,
)
from oracle import affine_deviation, conditional_expectation
from simulate import check_diagnostic_target, conditional_mean_discrepancy, gibbs_run, sample_family
from .config_parser import ModelConfig
from .models import ClassifyResult, GibbsResult, OracleResult, SampleBatch


logger = logging.getLogger(__name__)


def _require(config: ModelConfig, kinds: tuple, command: str):
    if not isinstance(config, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise ConfigSchemaError(f"'{command}' needs a {names} config, got {type(config).__name__}")
    return config


def classify(config: ModelConfig) -> ClassifyResult:
    spec: LinearCESpec = _require(config, (LinearCESpec,), "classify")
    conditions = necessary_conditions(spec)
    if spec.n != 2:
        return ClassifyResult(conditions=conditions)
    a, b, c, d = spec.coefficients()
    notes = {}
    domain = None
    if min(a, b, c, d) > 0 and a * c < 1:
        domain = classify_theta_domain(a, b, c, d)
    else:
        notes["theta_region"] = "needs positive slopes and intercepts with ac < 1"
    relations = coefficient_relations(a, b, c, d)
    bound = None
    try:
        bound = choose_support_bound(a, b, c, d)
    except OutOfTheoremScopeError as e:
        notes["support_bound"] = str(e)
    return ClassifyResult(
        conditions=conditions,
        theta_domain=domain,
        relations=relations,
        support_bound=bound,
        notes=notes,
    )


def build(config: ModelConfig, trunc: Optional[int] = None) -> JointPMF:
    descriptor: FamilyDescriptor = _require(config, (FamilyDescriptor,), "build")
    return make_family(descriptor).build(trunc)


def check_compat(config: ModelConfig) -> CompatVerdict:
    spec = _require(config, (LinearPoissonSpec, CARSpec, RandomCoeffSpec), "check-compat")
    if isinstance(spec, LinearPoissonSpec):
        return check_linear_poisson(spec.a, spec.b, spec.c, spec.d)
    if isinstance(spec, CARSpec):
        return check_car_structure(spec)
    return check_random_coeff(spec)


def solve_lp(config: ModelConfig, trunc: Optional[int] = None):
    spec: LinearCESpec = _require(config, (LinearCESpec,), "solve-lp")
    if spec.n != 2:
        if trunc is None:
            raise ConfigSchemaError("Exploratory n >= 3 solves need an explicit --trunc")
        return solve_feasibility_experimental(spec, trunc)
    if trunc is None:
        trunc = choose_support_bound(*spec.coefficients())
        logger.info(f"Support bound chosen: N={trunc}")
    return solve_feasibility(spec, trunc)


def oracle(config: ModelConfig, trunc: Optional[int] = None, target: int = 0) -> OracleResult:
    joint = build(config, trunc)
    table = conditional_expectation(joint, target)
    try:
        return OracleResult(family=joint.family, table=table, fit=affine_deviation(joint, target))
    except UnderdeterminedFitError as e:
        logger.warning(f"Affine fit skipped: {e}")
        return OracleResult(family=joint.family, table=table, fit_error=str(e))


def sample(config: ModelConfig, count: int, seed: Optional[int] = None) -> SampleBatch:
    descriptor: FamilyDescriptor = _require(config, (FamilyDescriptor,), "sample")
    seed = settings.default_seed if seed is None else seed
    samples = sample_family(descriptor, count, seed)
    return SampleBatch(family=descriptor.family.value, samples=samples, seed=seed)


def gibbs(
    config: ModelConfig,
    sweeps: int,
    burnin: int,
    chains: Optional[int] = None,
    seed: Optional[int] = None,
    min_visits: Optional[int] = None,
    target: int = 0
) -> GibbsResult:
    spec = _require(config, (LinearPoissonSpec, CARSpec, RandomCoeffSpec), "gibbs")
    seed = settings.default_seed if seed is None else seed
    check_diagnostic_target(2 if isinstance(spec, LinearPoissonSpec) else spec.n, target)
    samples = gibbs_run(spec, sweeps, burnin=burnin, seed=seed, chains=chains)
    diagnostic = conditional_mean_discrepancy(spec, samples, target=target, min_visits=min_visits)
    return GibbsResult(spec=type(spec).__name__, samples=samples, diagnostic=diagnostic, seed=seed)


COMMANDS = ("classify", "build", "check-compat", "solve-lp", "oracle", "sample", "gibbs")


def run_command(name: str, config: ModelConfig, options) -> object:
    """Dispatch a subcommand with argparse-style options."""
    if name == "classify":
        return classify(config)
    if name == "build":
        return build(config, options.trunc)
    if name == "check-compat":
        return check_compat(config)
    if name == "solve-lp":
        return solve_lp(config, options.trunc)
    if name == "oracle":
        return oracle(config, options.trunc, options.target)
    if name == "sample":
        return sample(config, options.count, options.seed)
    if name == "gibbs":
        return gibbs(
            config,
            options.sweeps,
            options.burnin,
            chains=options.chains,
            seed=options.seed,
            min_visits=options.min_visits,
            target=options.target,
        )
    raise CountCompatError(f"Unknown command '{name}'")
