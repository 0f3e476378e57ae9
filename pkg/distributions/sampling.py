"""
Random draws from catalogue laws and from random sums of them.
"""

import numpy as np

from config.exceptions import UnsupportedLawError
from .catalogue import as_negbinomial, theta_ratio_components
from .models import Bernoulli, BetaNB, Degenerate, Poisson, ThetaRatio


# Smallest success probability handed to numpy's NB sampler
_MIN_PROBABILITY = 1e-300


def _nb_sum(successes, p, rng: np.random.Generator) -> np.ndarray:
    # NB(0, p) is a point mass at zero, which numpy does not accept
    successes = np.asarray(successes, dtype=float)
    out = np.zeros(successes.shape, dtype=np.int64)
    mask = successes > 0
    if np.any(mask):
        p = np.broadcast_to(np.asarray(p, dtype=float), successes.shape)
        out[mask] = rng.negative_binomial(successes[mask], p[mask])
    return out


def draw(law, size, rng: np.random.Generator) -> np.ndarray:
    """
    Independent draws from a catalogue law.
    
    Args:
        law: Catalogue law
        size: Output shape
        rng: numpy Generator
    """
    nb = as_negbinomial(law)
    if isinstance(law, Poisson):
        return rng.poisson(law.lam, size)
    if nb is not None:
        return rng.negative_binomial(nb.r, nb.p, size)
    if isinstance(law, Bernoulli):
        return rng.binomial(1, law.p, size)
    if isinstance(law, ThetaRatio):
        parts = theta_ratio_components(law)
        geometric = rng.negative_binomial(1, parts.geometric_p, size)
        if parts.kind == "zero_inflated":
            return rng.binomial(1, parts.weight, size) * geometric
        if parts.kind == "bernoulli_convolution":
            return rng.binomial(1, parts.weight, size) + geometric
        return geometric
    if isinstance(law, BetaNB):
        u = np.clip(rng.beta(law.alpha1, law.alpha2, size), _MIN_PROBABILITY, 1.0)
        return rng.negative_binomial(law.r, u)
    if isinstance(law, Degenerate):
        return np.full(size, law.k, dtype=np.int64)
    raise UnsupportedLawError(f"No sampler for {law!r}")


def compound_sum(law, counts, rng: np.random.Generator) -> np.ndarray:
    """
    Draw sum_{k <= n} W_k for each n in counts, W_k i.i.d. from law.
    
    Closed forms are used where the sum stays in a known family
    (binomial, Poisson, NB); other laws fall back to explicit summation.
    """
    counts = np.asarray(counts, dtype=np.int64)
    nb = as_negbinomial(law)
    if isinstance(law, Bernoulli):
        return rng.binomial(counts, law.p)
    if isinstance(law, Poisson):
        return rng.poisson(law.lam * counts)
    if nb is not None:
        return _nb_sum(nb.r * counts, nb.p, rng)
    if isinstance(law, ThetaRatio):
        parts = theta_ratio_components(law)
        if parts.kind == "zero_inflated":
            return _nb_sum(rng.binomial(counts, parts.weight), parts.geometric_p, rng)
        if parts.kind == "bernoulli_convolution":
            return rng.binomial(counts, parts.weight) + _nb_sum(counts, parts.geometric_p, rng)
        return _nb_sum(counts, parts.geometric_p, rng)
    if isinstance(law, Degenerate):
        return law.k * counts
    flat = counts.ravel()
    out = np.array([int(draw(law, int(n), rng).sum()) for n in flat], dtype=np.int64)
    return out.reshape(counts.shape)
