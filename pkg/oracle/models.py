"""
Result containers for the brute-force oracle.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class CETable:
    """
    E[X_target | rest] over the conditioning configurations with slice mass
    above ``threshold``.
    """
    target: int
    given_axes: Tuple[int, ...]
    configurations: np.ndarray
    means: np.ndarray
    masses: np.ndarray
    threshold: float
    skipped: int

    def __len__(self) -> int:
        return self.means.size

    def column_names(self) -> List[str]:
        return [f"x{axis}" for axis in self.given_axes]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.configurations, columns=self.column_names())
        frame["mean"] = self.means
        frame["mass"] = self.masses
        return frame

    def lookup(self, given: Tuple[int, ...]) -> float:
        """Conditional mean at one configuration (KeyError when skipped)."""
        hits = np.flatnonzero(np.all(self.configurations == np.asarray(given), axis=1))
        if hits.size == 0:
            raise KeyError(f"Configuration {given} is below the mass threshold or off the grid")
        return float(self.means[hits[0]])


@dataclass(frozen=True)
class AffineFitReport:
    """Probability-weighted affine fit of a conditional-expectation table."""
    target: int
    slopes: Tuple[float, ...]
    intercept: float
    max_abs_deviation: float
    mass_covered: float
    coverage_target: float
    configurations_used: int

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "slopes": list(self.slopes),
            "intercept": self.intercept,
            "max_abs_deviation": self.max_abs_deviation,
            "mass_covered": self.mass_covered,
            "coverage_target": self.coverage_target,
            "configurations_used": self.configurations_used,
        }
