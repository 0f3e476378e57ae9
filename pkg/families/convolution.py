"""
Tensor convolutions for common-component (trivariate reduction) models.
"""

from functools import reduce
from typing import Sequence

import numpy as np


def outer_product(pmfs: Sequence[np.ndarray]) -> np.ndarray:
    """Joint pmf of independent coordinates."""
    return reduce(np.multiply.outer, [np.asarray(p, dtype=float) for p in pmfs])


def add_common_component(tensor: np.ndarray, pmf: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """
    Law of the tensor's vector after adding one count W to every axis in ``axes``.

    out[x] = sum_w pmf[w] * tensor[x - w e_axes]. Entries with all coordinates
    <= N are exact whatever the truncation of the inputs.
    """
    N = tensor.shape[0] - 1
    out = np.zeros_like(tensor)
    for w in range(min(N, pmf.size - 1) + 1):
        if pmf[w] == 0.0:
            continue
        target = [slice(None)] * tensor.ndim
        source = [slice(None)] * tensor.ndim
        for axis in axes:
            target[axis] = slice(w, N + 1)
            source[axis] = slice(0, N + 1 - w)
        out[tuple(target)] += pmf[w] * tensor[tuple(source)]
    return out
