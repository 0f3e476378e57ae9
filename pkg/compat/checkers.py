"""
Closed-form compatibility verdicts for the conditional specification families.
"""

from typing import Optional
import logging

import numpy as np
from scipy.stats import poisson

from config import settings
from config.exceptions import (
    DegenerateSpecError,
    IncompatibleParametersError,
    ParameterDomainError,
    UnsupportedLawError,
)
from distributions import (
    LAW_TYPES,
    Bernoulli,
    Degenerate,
    Poisson,
    ThetaRatio,
    as_negbinomial,
)
from families import FamilyDescriptor, FamilyType, ThetaFamilyParams
from .models import CARSpec, CompatVerdict, LinearPoissonSpec, RandomCoeffSpec
from .separability import separability_check_conditionals


logger = logging.getLogger(__name__)


def _close(lhs: float, rhs: float, tol: float) -> bool:
    return abs(lhs - rhs) <= tol * max(1.0, abs(lhs), abs(rhs))


def _log_verdict(name: str, verdict: CompatVerdict) -> CompatVerdict:
    status = "compatible" if verdict.compatible else "incompatible"
    logger.info(f"{name}: {status} ({verdict.reason})")
    return verdict


def check_linear_poisson(
    a: float,
    b: float,
    c: float,
    d: float,
    grid: Optional[int] = None,
    tolerance: Optional[float] = None
) -> CompatVerdict:
    """
    X | Y ~ Poisson(cY + d), Y | X ~ Poisson(aX + b).

    Compatible only without cross dependence (a = c = 0), in which case X and
    Y are independent Poisson(d) and Poisson(b).

    Args:
        a, b, c, d: Slopes (>= 0) and intercepts (> 0)
        grid: If set, also report the separability residual on {0..grid}^2
        tolerance: Zero-slope tolerance
    """
    spec = LinearPoissonSpec(a=a, b=b, c=c, d=d)
    tol = settings.parameter_tolerance if tolerance is None else tolerance
    details = {}
    if grid is not None:
        x = np.arange(grid + 1)[:, None]
        y = np.arange(grid + 1)[None, :]
        report = separability_check_conditionals(
            poisson.pmf(x, spec.c * y + spec.d),
            poisson.pmf(y, spec.a * x + spec.b),
        )
        details["separability_residual"] = report.residual
    a_zero, c_zero = spec.a <= tol, spec.c <= tol
    if a_zero and c_zero:
        family = FamilyDescriptor(
            family=FamilyType.INDEPENDENT,
            params={"laws": [{"kind": "poisson", "lambda": spec.d}, {"kind": "poisson", "lambda": spec.b}]},
        )
        return _log_verdict("linear_poisson", CompatVerdict.accept(family, "no_cross_dependence", **details))
    if a_zero != c_zero:
        return _log_verdict(
            "linear_poisson",
            CompatVerdict.reject("one_sided_zero_slope", max(spec.a, spec.c), **details),
        )
    return _log_verdict(
        "linear_poisson",
        CompatVerdict.reject("poisson_conditionals_with_cross_dependence", spec.a * spec.c, **details),
    )


def check_binomial_thinning(
    alpha: float,
    beta: float,
    eps,
    eta,
    tolerance: Optional[float] = None
) -> CompatVerdict:
    """
    X | Y = Bin(Y, alpha) + eps, Y | X = Bin(X, beta) + eta.

    Compatible iff eps, eta are Poisson and
    alpha / (lambda_eps (1 - alpha)) = beta / (lambda_eta (1 - beta)).
    The solution is the trivariate Poisson reduction with
    lambda0 = alpha lambda_eta / (1 - alpha), lambda1 = lambda_eps, lambda2 = lambda_eta.
    """
    if not (0 < alpha < 1 and 0 < beta < 1):
        raise ParameterDomainError(f"Thinning probabilities must lie in (0, 1), got {alpha}, {beta}")
    tol = settings.parameter_tolerance if tolerance is None else tolerance
    if not isinstance(eps, Poisson) or not isinstance(eta, Poisson):
        return _log_verdict("binomial_thinning", CompatVerdict.reject("innovations_not_poisson"))
    lhs = alpha / (eps.lam * (1.0 - alpha))
    rhs = beta / (eta.lam * (1.0 - beta))
    if not _close(lhs, rhs, tol):
        return _log_verdict("binomial_thinning", CompatVerdict.reject("balance_violated", abs(lhs - rhs)))
    lambda0 = alpha * eta.lam / (1.0 - alpha)
    family = FamilyDescriptor(
        family=FamilyType.TRIVARIATE_POISSON,
        params={"lambda0": lambda0, "lambda1": eps.lam, "lambda2": eta.lam},
    )
    return _log_verdict(
        "binomial_thinning",
        CompatVerdict.accept(
            family,
            "binomial_thinning_poisson_innovations",
            balance=lhs,
            lambda_x=(alpha * eta.lam + eps.lam) / (1.0 - alpha * beta),
            lambda_y=(beta * eps.lam + eta.lam) / (1.0 - alpha * beta),
        ),
    )


def _check_supported(law) -> None:
    if not isinstance(law, tuple(LAW_TYPES.values())):
        raise UnsupportedLawError(f"Cannot judge a law outside the catalogue: {law!r}")


def _is_point_mass(law) -> bool:
    if isinstance(law, Degenerate):
        return True
    return isinstance(law, Bernoulli) and law.p in (0.0, 1.0)


def _as_theta_ratio(law) -> Optional[ThetaRatio]:
    """ThetaRatio view of geometric-type thinning laws."""
    if isinstance(law, ThetaRatio):
        return law
    nb = as_negbinomial(law)
    if nb is not None and nb.r == 1.0:
        return ThetaRatio(theta_num=0.0, theta_den=(1.0 - nb.p) / nb.p)
    return None


def _geometric_p(law) -> Optional[float]:
    theta = _as_theta_ratio(law)
    if theta is None or theta.theta_num != 0.0:
        return None
    return 1.0 / (1.0 + theta.theta_den)


def _check_theta_case(spec: CARSpec, tol: float) -> CompatVerdict:
    thin_x, thin_y = _as_theta_ratio(spec.law(0, 1)), _as_theta_ratio(spec.law(1, 0))
    eps, eta = as_negbinomial(spec.innovation[0]), as_negbinomial(spec.innovation[1])
    if eps is None or eta is None:
        return CompatVerdict.reject("innovations_not_negative_binomial")
    if not _close(eps.r, eta.r, tol):
        return CompatVerdict.reject("innovation_shapes_differ", abs(eps.r - eta.r))
    theta1, theta3 = thin_x.theta_den, thin_y.theta_den
    expected_eps, expected_eta = 1.0 / (1.0 + theta1), 1.0 / (1.0 + theta3)
    if not _close(eps.p, expected_eps, tol) or not _close(eta.p, expected_eta, tol):
        return CompatVerdict.reject(
            "innovation_probability_mismatch",
            max(abs(eps.p - expected_eps), abs(eta.p - expected_eta)),
        )
    params = ThetaFamilyParams(
        delta=eps.r,
        theta1=theta1,
        theta2=thin_x.theta_num,
        theta3=theta3,
        theta4=thin_y.theta_num,
    )
    try:
        params.check_constraints(tol)
    except IncompatibleParametersError as e:
        return CompatVerdict.reject(
            "theta_constraints_violated", abs(params.sameproduct_residual()), message=str(e)
        )
    family = FamilyDescriptor(family=FamilyType.THETA, params=params.model_dump())
    return CompatVerdict.accept(family, "theta_ratio_thinning_nb_innovations")


def _check_conjugate_case(spec: CARSpec, tol: float) -> CompatVerdict:
    # every X_i given the rest must be NB(delta + sum of the others, p_i)
    n = spec.n
    shapes, probabilities = [], []
    for i in range(n):
        ps = [_geometric_p(spec.law(i, j)) for j in range(n) if j != i]
        if any(p is None for p in ps):
            return CompatVerdict.reject("thinning_not_geometric", float(i))
        if not all(_close(p, ps[0], tol) for p in ps):
            return CompatVerdict.reject("thinning_laws_differ", max(ps) - min(ps))
        innovation = as_negbinomial(spec.innovation[i])
        if innovation is None:
            return CompatVerdict.reject("innovations_not_negative_binomial", float(i))
        if not _close(innovation.p, ps[0], tol):
            return CompatVerdict.reject("innovation_probability_mismatch", abs(innovation.p - ps[0]))
        shapes.append(innovation.r)
        probabilities.append(ps[0])
    if not all(_close(r, shapes[0], tol) for r in shapes):
        return CompatVerdict.reject("innovation_shapes_differ", max(shapes) - min(shapes))
    # 1 - p_i = lambda_i / (beta + sum lambda); the scale is fixed by beta = 1
    q = 1.0 - np.array(probabilities)
    if q.sum() >= 1.0:
        return CompatVerdict.reject("geometric_probabilities_too_small", float(q.sum() - 1.0))
    total = q.sum() / (1.0 - q.sum())
    lambdas = [float(v) for v in q * (1.0 + total)]
    family = FamilyDescriptor(
        family=FamilyType.POISSON_GAMMA,
        params={"alpha": shapes[0], "beta": 1.0, "lambdas": lambdas},
    )
    return CompatVerdict.accept(family, "poisson_gamma_conjugacy")


def check_car_structure(spec: CARSpec, tolerance: Optional[float] = None) -> CompatVerdict:
    """
    Compatibility of a compound autoregressive specification.

    n = 2: compatible in exactly two cases, Bernoulli thinning with Poisson
    innovations (balance condition) or ThetaRatio thinning with NB
    innovations sharing delta. n >= 3: only the Poisson-gamma structure
    (identical geometric thinnings per coordinate, NB innovations with a
    common delta).

    Raises:
        DegenerateSpecError: If a thinning law is a point mass
        UnsupportedLawError: If a law is outside the catalogue
    """
    tol = settings.parameter_tolerance if tolerance is None else tolerance
    for i in range(spec.n):
        _check_supported(spec.innovation[i])
        for j in range(spec.n):
            if i == j:
                continue
            law = spec.law(i, j)
            _check_supported(law)
            if _is_point_mass(law):
                raise DegenerateSpecError(f"Thinning law ({i},{j}) is a point mass: {law!r}")
    if spec.n == 2:
        thin_x, thin_y = spec.law(0, 1), spec.law(1, 0)
        if isinstance(thin_x, Bernoulli) and isinstance(thin_y, Bernoulli):
            verdict = check_binomial_thinning(thin_x.p, thin_y.p, spec.innovation[0], spec.innovation[1], tol)
            return verdict
        if _as_theta_ratio(thin_x) is not None and _as_theta_ratio(thin_y) is not None:
            return _log_verdict("car_structure", _check_theta_case(spec, tol))
        return _log_verdict("car_structure", CompatVerdict.reject("thinning_laws_outside_compatible_cases"))
    return _log_verdict("car_structure", _check_conjugate_case(spec, tol))


def check_random_coeff(spec: RandomCoeffSpec, tolerance: Optional[float] = None) -> CompatVerdict:
    """
    Binomial thinning with Beta probabilities.

    n = 2: compatible iff X | Y thins with Beta(alpha, beta2), Y | X with
    Beta(alpha, beta1), and the innovations are NB(beta1, theta), NB(beta2, theta).
    The solution is the trivariate NB reduction. n >= 3 never has a
    non-degenerate solution.
    """
    tol = settings.parameter_tolerance if tolerance is None else tolerance
    if spec.n >= 3:
        return _log_verdict("random_coeff", CompatVerdict.reject("no_solution_beyond_two_dimensions"))
    for law in spec.innovation:
        _check_supported(law)
    (alpha_x, beta2), (alpha_y, beta1) = spec.beta_params[0][1], spec.beta_params[1][0]
    if not _close(alpha_x, alpha_y, tol):
        return _log_verdict("random_coeff", CompatVerdict.reject("first_beta_parameters_differ", abs(alpha_x - alpha_y)))
    eps, eta = as_negbinomial(spec.innovation[0]), as_negbinomial(spec.innovation[1])
    if eps is None or eta is None:
        return _log_verdict("random_coeff", CompatVerdict.reject("innovations_not_negative_binomial"))
    if not _close(eps.p, eta.p, tol):
        return _log_verdict("random_coeff", CompatVerdict.reject("innovation_probabilities_differ", abs(eps.p - eta.p)))
    if not _close(eps.r, beta1, tol) or not _close(eta.r, beta2, tol):
        return _log_verdict(
            "random_coeff",
            CompatVerdict.reject("innovation_shapes_mismatch", max(abs(eps.r - beta1), abs(eta.r - beta2))),
        )
    family = FamilyDescriptor(
        family=FamilyType.TRIVARIATE_NB,
        params={"alpha": alpha_x, "beta1": beta1, "beta2": beta2, "theta": eps.p},
    )
    return _log_verdict("random_coeff", CompatVerdict.accept(family, "beta_thinning_nb_innovations"))
