from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class OneCutSolution:
    """Single cut [a, b] with midpoint beta and half-width delta (delta**2 = delta2)"""

    beta: complex
    delta2: complex
    a: complex
    b: complex
    branch_k: Optional[int] = None
    residual_norm: float = 0.0

    @property
    def delta(self) -> complex:
        return (self.b - self.a) / 2

    @property
    def endpoints(self) -> Tuple[complex, complex]:
        return (self.a, self.b)


@dataclass(frozen=True)
class CubicBranchPoint:
    t_k: complex
    index: int


@dataclass(frozen=True)
class TwoCutSolution:
    """
    Two cuts (a, b) and (c, d); the gap joins b and c.

    Cut (a, b) is the one whose midpoint has the smaller imaginary part.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    r: float = 0.0
    residual_norm: float = float("inf")
    t: Optional[complex] = None

    @property
    def endpoints(self) -> Tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    @classmethod
    def from_endpoints(cls, endpoints, **kwargs) -> "TwoCutSolution":
        a, b, c, d = (complex(e) for e in endpoints)
        return cls(a=a, b=b, c=c, d=d, **kwargs)

    def with_values(self, **kwargs) -> "TwoCutSolution":
        return replace(self, **kwargs)

    def min_separation(self) -> float:
        e = np.asarray(self.endpoints)
        diff = np.abs(e[:, None] - e[None, :])
        return float(np.min(diff[np.triu_indices(4, 1)]))
