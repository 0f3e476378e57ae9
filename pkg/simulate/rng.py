"""
Counter-based random streams.
"""

from typing import Optional

import numpy as np

from config import settings
from config.exceptions import ParameterDomainError


def make_generator(seed: Optional[int] = None, stream: int = 0) -> np.random.Generator:
    """
    Philox generator for one (seed, stream) pair.

    Distinct streams of one seed are independent, so coordinate i of a
    Gibbs scan can own stream i.

    Args:
        seed: Nonnegative 64-bit seed (defaults to settings.default_seed)
        stream: Stream index
    """
    seed = settings.default_seed if seed is None else int(seed)
    if seed < 0 or seed >= 2 ** 64:
        raise ParameterDomainError(f"Seed must be a 64-bit nonnegative integer, got {seed}")
    if stream < 0:
        raise ParameterDomainError(f"Stream index must be nonnegative, got {stream}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, int(stream)])))
