"""
Exact i.i.d. sampling of the compatible families.
"""

from pathlib import Path
from typing import Optional, Sequence, Union
import logging

import numpy as np
import pandas as pd

from config.exceptions import ParameterDomainError
from families import BaseFamily, FamilyDescriptor, JointPMF, make_family
from .rng import make_generator


logger = logging.getLogger(__name__)


def sample_family(
    descriptor: Union[FamilyDescriptor, BaseFamily],
    count: int,
    seed: Optional[int] = None
) -> np.ndarray:
    """
    Draw from a family through its stochastic representation.

    Args:
        descriptor: Family descriptor or an already constructed family
        count: Number of draws
        seed: 64-bit seed

    Returns:
        Integer matrix of shape (count, dimension)
    """
    if count <= 0:
        raise ParameterDomainError(f"Sample count must be positive, got {count}")
    family = descriptor if isinstance(descriptor, BaseFamily) else make_family(descriptor)
    samples = family.sample(int(count), make_generator(seed, 0))
    logger.info(f"Drew {count} samples from {family.name}")
    return np.asarray(samples, dtype=np.int64)


def empirical_pmf(samples: np.ndarray, bound: int) -> np.ndarray:
    """Share of draws at each point of {0..bound}^n (draws off the grid are dropped)."""
    samples = np.asarray(samples)
    n = samples.shape[1]
    inside = np.all(samples <= bound, axis=1)
    flat = np.ravel_multi_index(samples[inside].T, (bound + 1,) * n)
    counts = np.bincount(flat, minlength=(bound + 1) ** n)
    return counts.reshape((bound + 1,) * n) / samples.shape[0]


def total_variation(samples: np.ndarray, joint: JointPMF, bound: int = 10) -> float:
    """Half the L1 distance between empirical and tabulated pmfs on {0..bound}^n."""
    bound = min(bound, joint.N)
    reference = joint.probs[(slice(0, bound + 1),) * joint.n]
    return 0.5 * float(np.abs(empirical_pmf(samples, bound) - reference).sum())


def write_samples_csv(
    samples: np.ndarray,
    path: Union[str, Path],
    columns: Optional[Sequence[str]] = None
) -> Path:
    """One draw per row."""
    path = Path(path)
    samples = np.asarray(samples)
    columns = list(columns) if columns is not None else [f"x{i}" for i in range(samples.shape[1])]
    pd.DataFrame(samples, columns=columns).to_csv(path, index=False)
    logger.info(f"Wrote {samples.shape[0]} draws to {path}")
    return path
