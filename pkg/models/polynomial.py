from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P


def _as_coeffs(values: Iterable[complex]) -> Tuple[complex, ...]:
    coeffs = [complex(c) for c in values]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        coeffs = [0j]
    return tuple(coeffs)


@dataclass(frozen=True)
class ComplexPolynomial:
    """Polynomial with complex coefficients stored in ascending degree"""

    coeffs: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: complex = 1.0) -> "ComplexPolynomial":
        return cls(tuple(leading * np.asarray(P.polyfromroots(list(roots)), dtype=complex)))

    @classmethod
    def monomial(cls, degree: int, coefficient: complex = 1.0) -> "ComplexPolynomial":
        return cls((0j,) * degree + (complex(coefficient),))

    @classmethod
    def zero(cls) -> "ComplexPolynomial":
        return cls((0j,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0j,)

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def coefficient(self, power: int) -> complex:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return 0j

    def __call__(self, z):
        return P.polyval(z, np.asarray(self.coeffs, dtype=complex))

    def __add__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        return ComplexPolynomial(tuple(P.polyadd(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        return ComplexPolynomial(tuple(P.polysub(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, ComplexPolynomial):
            return ComplexPolynomial(tuple(P.polymul(self.coeffs, other.coeffs)))
        return ComplexPolynomial(tuple(complex(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def __neg__(self) -> "ComplexPolynomial":
        return self * -1.0

    def deriv(self, m: int = 1) -> "ComplexPolynomial":
        if self.degree < m:
            return ComplexPolynomial.zero()
        return ComplexPolynomial(tuple(P.polyder(np.asarray(self.coeffs, dtype=complex), m)))

    def integ(self) -> "ComplexPolynomial":
        return ComplexPolynomial(tuple(P.polyint(np.asarray(self.coeffs, dtype=complex))))

    def roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.empty(0, dtype=complex)
        return np.asarray(P.polyroots(np.asarray(self.coeffs, dtype=complex)), dtype=complex)

    def conjugate(self) -> "ComplexPolynomial":
        return ComplexPolynomial(tuple(c.conjugate() for c in self.coeffs))

    def scale(self) -> float:
        return float(max(abs(c) for c in self.coeffs)) or 1.0


@dataclass(frozen=True)
class LaurentSeries:
    """
    Truncated Laurent expansion at infinity.

    ``coeffs[i]`` multiplies ``z**(top_degree - i)``.
    """

    top_degree: int
    coeffs: Tuple[complex, ...]

    def coefficient(self, power: int) -> complex:
        index = self.top_degree - power
        if 0 <= index < len(self.coeffs):
            return self.coeffs[index]
        return 0j

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by z**k"""
        return LaurentSeries(self.top_degree + k, self.coeffs)

    def nonnegative_part(self) -> ComplexPolynomial:
        if self.top_degree < 0:
            return ComplexPolynomial.zero()
        return ComplexPolynomial(tuple(self.coefficient(p) for p in range(self.top_degree + 1)))


@dataclass(frozen=True)
class BranchedRadical:
    """
    w(z) = sqrt(prod (z - e)) over 2s endpoints, on the branch w ~ z**s.

    Endpoints are stored pairwise: ``(a_1^-, a_1^+, a_2^-, a_2^+, ...)``;
    each pair is one cut.
    """

    endpoints: Tuple[complex, ...]
    branch_tag: str = field(default="z^s")

    def __post_init__(self):
        points = tuple(complex(e) for e in self.endpoints)
        if len(points) == 0 or len(points) % 2:
            raise ValueError("a branched radical needs an even, nonzero number of endpoints")
        object.__setattr__(self, "endpoints", points)

    @property
    def s(self) -> int:
        return len(self.endpoints) // 2

    @property
    def pairs(self) -> Tuple[Tuple[complex, complex], ...]:
        e = self.endpoints
        return tuple((e[2 * j], e[2 * j + 1]) for j in range(self.s))

    @property
    def eps_root(self) -> float:
        return 1e-9 * (1.0 + max(abs(e) for e in self.endpoints))

    def square(self) -> ComplexPolynomial:
        return ComplexPolynomial.from_roots(self.endpoints)
