from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np


@dataclass(frozen=True)
class MomentTable:
    """mu_k = integral over the contour of z**k exp(-n W(z)) dz, k = 0..2n (mpmath values)"""

    n: int
    moments: Tuple[Any, ...]
    precision_digits: int
    contour: Tuple[int, int] = (1, 2)


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """
    Monic recurrence p_{j+1} = (z - alpha_j) p_j - beta_j p_{j-1}.

    ``beta[j - 1]`` holds beta_j for j = 1..n-1; ``mu0`` is the zeroth moment.
    """

    alpha: Tuple[Any, ...]
    beta: Tuple[Any, ...]
    mu0: Any
    precision_digits: int

    @property
    def n(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class ZeroSet:
    zeros: Tuple[Any, ...]
    max_residual: float
    precision_digits: int

    def as_array(self) -> np.ndarray:
        return np.array([complex(z) for z in self.zeros], dtype=complex)


@dataclass(frozen=True)
class ZeroComparison:
    distances: np.ndarray
    nearest_cut: np.ndarray
    counts: Tuple[int, ...]
    hausdorff: float
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def max_distance(self) -> float:
        return float(self.distances.max()) if self.distances.size else 0.0

    def as_rows(self) -> List[Tuple[int, float, int]]:
        return [(i, float(d), int(c)) for i, (d, c) in enumerate(zip(self.distances, self.nearest_cut))]
