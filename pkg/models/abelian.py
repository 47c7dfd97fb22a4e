from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from models.polynomial import ComplexPolynomial


@dataclass(frozen=True)
class DifferentialBasis:
    """
    Normalized Abelian differentials num(z) dz / w(z).

    ``second_kind[k - 1]`` is P_k (k = 1..max_order); ``third_kind`` is P_0;
    ``first_kind[j]`` is p_{j+1}.
    """

    endpoints: Tuple[complex, ...]
    first_kind: Tuple[ComplexPolynomial, ...]
    second_kind: Tuple[ComplexPolynomial, ...]
    third_kind: ComplexPolynomial

    @property
    def s(self) -> int:
        return len(self.endpoints) // 2

    @property
    def max_order(self) -> int:
        return len(self.second_kind)

    def omega(self, n: int) -> ComplexPolynomial:
        """P_n, with P_0 the third-kind numerator"""
        if n == 0:
            return self.third_kind
        return self.second_kind[n - 1]


@dataclass(frozen=True)
class PeriodMatrix:
    B_first_kind: np.ndarray
    B_second_third: Tuple[np.ndarray, ...]
