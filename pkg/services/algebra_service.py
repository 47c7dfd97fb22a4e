"""
Hyperelliptic square roots and Laurent expansions at infinity.

w(z)**2 = prod (z - a_j^-)(z - a_j^+). The global branch used everywhere is the
"chord branch": a product over the cuts of (z - beta_j) sqrt(1 - (delta_j/(z - beta_j))**2)
with principal roots, so each factor is cut exactly on the straight chord
[a_j^-, a_j^+] and behaves like z at infinity.
"""
import logging
from typing import List, Optional, Sequence

import numpy as np

from core.exceptions import EvaluationAtBranchPoint
from models.polynomial import BranchedRadical, ComplexPolynomial, LaurentSeries

logger = logging.getLogger(__name__)


def chord_factor(z: np.ndarray, a: complex, b: complex) -> np.ndarray:
    beta = (a + b) / 2
    delta = (b - a) / 2
    u = z - beta
    with np.errstate(divide="ignore", invalid="ignore"):
        return u * np.sqrt(1 - (delta / u) ** 2)


def chord_branch(rad: BranchedRadical, z) -> np.ndarray:
    """Vectorised w(z) on the chord branch (no singularity guard)"""
    z = np.asarray(z, dtype=complex)
    w = np.ones_like(z)
    for a, b in rad.pairs:
        w = w * chord_factor(z, a, b)
    return w


def boundary_value(rad: BranchedRadical, z, cut_index: int) -> np.ndarray:
    """
    w(z+) for z on the chord of cut ``cut_index``

    z+ is the left side of the chord oriented from a^- to a^+.
    """
    z = np.asarray(z, dtype=complex)
    a, b = rad.pairs[cut_index]
    delta = (b - a) / 2
    one_plus = ((z - a) / delta).real
    one_minus = ((b - z) / delta).real
    w = 1j * delta * np.sqrt(np.clip(one_plus * one_minus, 0.0, None))
    for j, (p, q) in enumerate(rad.pairs):
        if j != cut_index:
            w = w * chord_factor(z, p, q)
    return w


def continue_sqrt(squares: np.ndarray, start: complex) -> np.ndarray:
    """
    Continuous square root of sampled values along a path

    Each sign is chosen closest to the previous value, starting from ``start``.
    """
    roots = np.sqrt(np.asarray(squares, dtype=complex))
    out = np.empty_like(roots)
    prev = complex(start)
    for i, value in enumerate(roots):
        if abs(value - prev) > abs(value + prev):
            value = -value
        out[i] = value
        prev = value
    return out


def _near_endpoint(rad: BranchedRadical, z: complex) -> Optional[complex]:
    for e in rad.endpoints:
        if abs(z - e) < rad.eps_root:
            return e
    return None


def _continue_along(rad: BranchedRadical, path: Sequence[complex]) -> complex:
    square = rad.square()
    z_prev = complex(path[0])
    w_prev = complex(chord_branch(rad, z_prev))

    for target in path[1:]:
        target = complex(target)
        step = target - z_prev
        while abs(target - z_prev) > 0:
            z_next = z_prev + step if abs(step) < abs(target - z_prev) else target
            if _near_endpoint(rad, z_next) is not None:
                raise EvaluationAtBranchPoint(
                    "continuation path passes through a branch point",
                    {"z": [z_next.real, z_next.imag]},
                )
            w_next = complex(np.sqrt(square(z_next)))
            if abs(w_next - w_prev) > abs(w_next + w_prev):
                w_next = -w_next
            # arg jump larger than pi/2: refine
            if w_prev != 0 and abs(np.angle(w_next / w_prev)) > np.pi / 2 and abs(step) > rad.eps_root:
                step = step / 2
                continue
            z_prev, w_prev = z_next, w_next
            step = 2 * step if abs(step) < abs(target - z_prev) / 4 else target - z_prev
    return w_prev


def eval_w(rad: BranchedRadical, z: complex, path_hint: Optional[Sequence[complex]] = None) -> complex:
    """
    Evaluate w(z) on the branch w ~ z**s

    Args:
        rad: The radical
        z: Evaluation point
        path_hint: Optional polyline; w is then continued along it from a
            reference point R e^{i theta0} with R = 10 max|endpoint|

    Returns:
        The value of w at z

    Raises:
        EvaluationAtBranchPoint: If z is within eps_root of an endpoint
    """
    z = complex(z)
    hit = _near_endpoint(rad, z)
    if hit is not None:
        raise EvaluationAtBranchPoint(
            "evaluation within eps_root of a branch point",
            {"z": [z.real, z.imag], "endpoint": [hit.real, hit.imag]},
        )

    if not path_hint:
        return complex(chord_branch(rad, z))

    radius = 10 * max(1.0, max(abs(e) for e in rad.endpoints))
    first = complex(path_hint[0])
    theta0 = np.angle(first) if first != 0 else 0.0
    path = [radius * np.exp(1j * theta0), *[complex(p) for p in path_hint], z]
    return _continue_along(rad, path)


def _binomial_series(gamma: float, e: complex, depth: int) -> np.ndarray:
    """Coefficients of (1 - e u)**gamma up to u**(depth - 1)"""
    c = np.zeros(depth, dtype=complex)
    c[0] = 1.0
    for k in range(1, depth):
        c[k] = c[k - 1] * (gamma - k + 1) / k * (-e)
    return c


def radical_series(rad: BranchedRadical, exponent: int, depth: int) -> np.ndarray:
    """Series in u = 1/z of z**(-s*exponent) * w**exponent"""
    series = np.zeros(depth, dtype=complex)
    series[0] = 1.0
    for e in rad.endpoints:
        factor = _binomial_series(exponent / 2, e, depth)
        series = np.convolve(series, factor)[:depth]
    return series


def laurent_at_infinity(
    num: ComplexPolynomial, rad: BranchedRadical, depth: int, exponent: int = -1
) -> LaurentSeries:
    """
    Laurent expansion of num(z) * w(z)**exponent at infinity

    Args:
        num: Numerator polynomial
        rad: The radical w
        depth: Number of coefficients returned (from the top power down)
        exponent: -1 for num / w, +1 for num * w

    Returns:
        LaurentSeries with exact coefficients down to the requested depth
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")

    top = num.degree + rad.s * exponent
    if num.is_zero:
        return LaurentSeries(top, (0j,) * depth)

    series = radical_series(rad, exponent, depth)
    d = num.degree
    coeffs = []
    for m in range(depth):
        total = 0j
        # z**i * u**k contributes to z**(top - m) when k = i - d + m
        for i in range(d + 1):
            k = i - d + m
            if 0 <= k < depth:
                total += num.coefficient(i) * series[k]
        coeffs.append(total)
    return LaurentSeries(top, tuple(coeffs))


def plus_part(num: ComplexPolynomial, rad: BranchedRadical, exponent: int = -1) -> ComplexPolynomial:
    """Nonnegative-power part of num * w**exponent at infinity"""
    top = num.degree + rad.s * exponent
    if num.is_zero or top < 0:
        return ComplexPolynomial.zero()
    return laurent_at_infinity(num, rad, top + 1, exponent).nonnegative_part()


def oplus_part(num: ComplexPolynomial, rad: BranchedRadical) -> ComplexPolynomial:
    """(num / w)_+ ; equals h(z) when num = W'"""
    return plus_part(num, rad, exponent=-1)


def sector_bisectors(W: ComplexPolynomial) -> List[float]:
    """arg z = (2 pi k - arg c) / d, the sectors where Re W -> +infinity for leading term c z**d"""
    d = W.degree
    c = W.leading
    return [float(((2 * np.pi * k - np.angle(c)) / d) % (2 * np.pi)) for k in range(d)]
