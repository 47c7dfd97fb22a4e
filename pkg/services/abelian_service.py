"""
Normalized Abelian differentials num(z) dz / w(z), their A/B periods, the
real period constants r_j and the intrinsic endpoint residuals.

Cycle conventions (recorded in exported metadata):
    A_i(omega) = 2 * integral over the gap chord a_i^+ -> a_{i+1}^- (chord branch)
    B_i(omega) = -2 * sum_{j <= i} integral over the cut chord a_j^- -> a_j^+ of omega(z+)
"""
import logging
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.exceptions import IllConditionedPeriods
from models.abelian import DifferentialBasis, PeriodMatrix
from models.polynomial import BranchedRadical, ComplexPolynomial
from services import algebra_service
from utils.quadrature import segment_integral

logger = logging.getLogger(__name__)

MAX_PERIOD_CONDITION = 1e12
T0 = -1.0


def _key(endpoints: Sequence[complex]) -> Tuple[complex, ...]:
    return tuple(complex(e) for e in endpoints)


@lru_cache(maxsize=512)
def monomial_integrals(
    endpoints: Tuple[complex, ...], kind: str, index: int, max_power: int, nodes: Optional[int]
) -> np.ndarray:
    """Integrals of z**n / w for n = 0..max_power along a gap (kind='gap') or cut chord"""
    rad = BranchedRadical(endpoints)
    powers = np.arange(max_power + 1)[:, None]

    if kind == "gap":
        start, end = endpoints[2 * index - 1], endpoints[2 * index]

        def integrand(z):
            return z[None, :] ** powers / algebra_service.chord_branch(rad, z)[None, :]
    else:
        start, end = rad.pairs[index]

        def integrand(z):
            return z[None, :] ** powers / algebra_service.boundary_value(rad, z, index)[None, :]

    return segment_integral(integrand, start, end, nodes=nodes)


def _apply(num: ComplexPolynomial, integrals: np.ndarray) -> complex:
    if num.is_zero:
        return 0j
    coeffs = np.asarray(num.coeffs, dtype=complex)
    return complex(coeffs @ integrals[: len(coeffs)])


def a_period(endpoints: Sequence[complex], num: ComplexPolynomial, cycle_index: int, nodes: Optional[int] = None) -> complex:
    """
    A_i(num dz / w) for 1 <= cycle_index <= s - 1

    Raises:
        QuadratureFailure: If adaptive refinement does not reach TOL_QUAD
    """
    e = _key(endpoints)
    s = len(e) // 2
    if not 1 <= cycle_index <= s - 1:
        raise ValueError(f"A-cycle index must lie in 1..{s - 1}")
    if num.is_zero:
        return 0j
    return 2 * _apply(num, monomial_integrals(e, "gap", cycle_index, num.degree, nodes))


def b_period(endpoints: Sequence[complex], num: ComplexPolynomial, cycle_index: int, nodes: Optional[int] = None) -> complex:
    """
    B_i(num dz / w) for 1 <= cycle_index <= s

    Raises:
        QuadratureFailure: If adaptive refinement does not reach TOL_QUAD
    """
    e = _key(endpoints)
    s = len(e) // 2
    if not 1 <= cycle_index <= s:
        raise ValueError(f"B-cycle index must lie in 1..{s}")
    if num.is_zero:
        return 0j
    total = 0j
    for j in range(cycle_index):
        total += _apply(num, monomial_integrals(e, "cut", j, num.degree, nodes))
    return -2 * total


def _plus_of_w(rad: BranchedRadical, shift: int) -> ComplexPolynomial:
    """(z**shift * w)_+ for shift >= -1"""
    depth = rad.s + 1 + max(shift, 0)
    series = algebra_service.laurent_at_infinity(ComplexPolynomial((1,)), rad, depth, exponent=1)
    return series.shift(shift).nonnegative_part()


def build_basis(endpoints: Sequence[complex], max_order: int = 3, nodes: Optional[int] = None) -> DifferentialBasis:
    """
    Canonical first-kind basis and normalized second/third-kind numerators

    Args:
        endpoints: 2s distinct branch points, ordered cut by cut
        max_order: Highest second-kind order (N + 1 for a potential of degree N + 1)

    Returns:
        DifferentialBasis with A_i(p_j) = delta_ij and A_i(P_k) = 0

    Raises:
        IllConditionedPeriods: If the A-period matrix has condition number above 1e12
    """
    e = _key(endpoints)
    rad = BranchedRadical(e)
    s = rad.s

    third = _plus_of_w(rad, -1)
    second = [(k / 2) * _plus_of_w(rad, k - 1) for k in range(1, max_order + 1)]

    if s == 1:
        return DifferentialBasis(endpoints=e, first_kind=(), second_kind=tuple(second), third_kind=third)

    M = np.array(
        [[a_period(e, ComplexPolynomial.monomial(m), i, nodes) for m in range(s - 1)] for i in range(1, s)],
        dtype=complex,
    )
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > MAX_PERIOD_CONDITION:
        raise IllConditionedPeriods("A-period matrix is ill conditioned", {"condition": float(cond)})
    inv = np.linalg.inv(M)

    first = tuple(ComplexPolynomial(tuple(inv[:, j])) for j in range(s - 1))

    def normalize(base: ComplexPolynomial) -> ComplexPolynomial:
        periods = np.array([a_period(e, base, i, nodes) for i in range(1, s)], dtype=complex)
        correction = -inv @ periods
        return base + ComplexPolynomial(tuple(correction))

    return DifferentialBasis(
        endpoints=e,
        first_kind=first,
        second_kind=tuple(normalize(P) for P in second),
        third_kind=normalize(third),
    )


def _potential_coefficients(W: ComplexPolynomial) -> np.ndarray:
    t = np.array(W.coeffs, dtype=complex)
    t[0] = T0
    return t


def period_matrix(endpoints: Sequence[complex], W: ComplexPolynomial, basis: Optional[DifferentialBasis] = None, nodes: Optional[int] = None) -> PeriodMatrix:
    basis = basis or build_basis(endpoints, max_order=W.degree, nodes=nodes)
    s = basis.s
    B1 = np.array(
        [[b_period(endpoints, p, i, nodes) for p in basis.first_kind] for i in range(1, s)],
        dtype=complex,
    ).reshape(s - 1, s - 1)
    B2 = tuple(
        np.array([b_period(endpoints, basis.omega(n), i, nodes) for i in range(1, s)], dtype=complex)
        for n in range(W.degree + 1)
    )
    return PeriodMatrix(B_first_kind=B1, B_second_third=B2)


def solve_r(endpoints: Sequence[complex], W: ComplexPolynomial, nodes: Optional[int] = None) -> List[float]:
    """
    Solve sum_j r_j Im B_i(dphi_j) = Re sum_n t_n B_i(dOmega_n), t_0 = -1

    Raises:
        IllConditionedPeriods: If Im B is (numerically) singular
    """
    e = _key(endpoints)
    if len(e) == 2:
        return []

    periods = period_matrix(e, W, nodes=nodes)
    t = _potential_coefficients(W)
    rhs = sum(t[n] * periods.B_second_third[n] for n in range(len(t))).real
    im_B = periods.B_first_kind.imag

    cond = np.linalg.cond(im_B)
    if not np.isfinite(cond) or cond > MAX_PERIOD_CONDITION:
        raise IllConditionedPeriods("Im B period matrix is ill conditioned", {"condition": float(cond)})
    r = np.linalg.solve(im_B, rhs)
    logger.debug("period constants r = %s", r)
    return [float(x) for x in r]


def _sum_t_P(basis: DifferentialBasis, W: ComplexPolynomial) -> ComplexPolynomial:
    t = _potential_coefficients(W)
    total = ComplexPolynomial.zero()
    for n in range(len(t)):
        if t[n] != 0:
            total = total + basis.omega(n) * complex(t[n])
    return total


def _sum_r_p(basis: DifferentialBasis, r: Sequence[float]) -> ComplexPolynomial:
    total = ComplexPolynomial.zero()
    for r_i, p_i in zip(r, basis.first_kind):
        total = total + p_i * (1j * r_i)
    return total


def ce_residual(
    endpoints: Sequence[complex],
    W: ComplexPolynomial,
    r: Sequence[float],
    basis: Optional[DifferentialBasis] = None,
) -> List[complex]:
    """sum_n t_n P_n(e) + i sum_i r_i p_i(e) at each endpoint e"""
    e = _key(endpoints)
    basis = basis or build_basis(e, max_order=W.degree)
    poly = _sum_t_P(basis, W) + _sum_r_p(basis, r)
    return [complex(poly(x)) for x in e]


def eep_residual(
    endpoints: Sequence[complex],
    W: ComplexPolynomial,
    r: Sequence[float],
    z: np.ndarray,
    basis: Optional[DifferentialBasis] = None,
) -> np.ndarray:
    """
    Relative residual of y w = 2 sum t_n P_n + 2i sum r_i p_i at sample points

    y = h w with h = (W'/w)_+, so the left side is the polynomial h w**2.
    """
    e = _key(endpoints)
    rad = BranchedRadical(e)
    basis = basis or build_basis(e, max_order=W.degree)
    h = algebra_service.oplus_part(W.deriv(), rad)
    lhs = (h * rad.square())(z)
    rhs = 2 * (_sum_t_P(basis, W) + _sum_r_p(basis, r))(z)
    return np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1.0)
