"""
Non-hermitian orthogonal polynomials for the weight exp(-n W(z)) on a contour
joining two convergence sectors, computed in arbitrary precision.

The contour is two rays leaving a hinge point along the sector bisectors;
moments are tanh-sinh integrals along each ray, truncated where the weight
falls below the working precision.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp

from core.config import settings
from core.exceptions import DegenerateHankelMinor, PrecisionExhausted, RootFindingStalled
from models.orthopoly import MomentTable, RecurrenceCoefficients, ZeroComparison, ZeroSet
from models.polynomial import ComplexPolynomial
from services import algebra_service, onecut_service
from utils.geometry import polyline_distance

logger = logging.getLogger(__name__)

GUARD_DIGITS = 20
MAX_RAY_LENGTH = 1e4
POLISH_STEPS = 8

# Real and imaginary part of a polynomial coefficient, exact
ExactCoefficient = Tuple[Fraction, Fraction]


def exact_coefficients(W: ComplexPolynomial) -> Tuple[ExactCoefficient, ...]:
    """Binary-exact rationals for the float coefficients of W (ascending)"""
    return tuple((Fraction(complex(c).real), Fraction(complex(c).imag)) for c in W.coeffs)


def cubic_coefficients(t: complex) -> Tuple[ExactCoefficient, ...]:
    """z**3/3 - t z with the 1/3 kept exact"""
    t = complex(t)
    zero = (Fraction(0), Fraction(0))
    return (zero, (-Fraction(t.real), -Fraction(t.imag)), zero, (Fraction(1, 3), Fraction(0)))


def _to_mpc(value: ExactCoefficient) -> Any:
    re, im = value
    return mp.mpc(mp.mpf(re.numerator) / re.denominator, mp.mpf(im.numerator) / im.denominator)


def truncation_radius(W: ComplexPolynomial, n: int, phi: float, hinge: complex, digits: int, k_max: int) -> float:
    """
    Ray length beyond which |z**k exp(-n W)| < 10**-(digits + 20) for k <= k_max

    Raises:
        PrecisionExhausted: If the weight does not decay along the ray
    """
    target = (digits + GUARD_DIGITS) * math.log(10)
    u = complex(math.cos(phi), math.sin(phi))
    R = 1.0
    while R < MAX_RAY_LENGTH:
        z = hinge + R * u
        if n * W(z).real - k_max * math.log(max(abs(z), 1.0)) > target:
            return R
        R *= 1.25
    raise PrecisionExhausted("weight does not decay along the ray", {"phi": phi, "n": n})


def _breakpoints(R: float) -> List[float]:
    return [0.0, R / 16, R / 8, R / 4, R / 2, R]


def _ray_moment(job: Tuple[Tuple[ExactCoefficient, ...], int, int, complex, float, float, int]) -> Tuple[Any, Any, Any]:
    """(integral, error estimate, magnitude scale) of z**k exp(-n W) dz along one ray"""
    coeffs, n, k, hinge, phi, R, digits = job
    with mp.workdps(digits + GUARD_DIGITS):
        c = [_to_mpc(x) for x in reversed(coeffs)]
        h = mp.mpc(hinge.real, hinge.imag)
        u = mp.expj(mp.mpf(phi))
        tolerance = mp.mpf(10) ** (-digits)

        def integrand(rho):
            z = h + rho * u
            return z ** k * mp.exp(-n * mp.polyval(c, z)) * u

        value, err = mp.quad(integrand, _breakpoints(R), error=True)
        samples = [abs(integrand(mp.mpf(R) * j / 32)) for j in range(33)]
        scale = max(samples) * R
        if err > tolerance * max(abs(value), scale):
            value, err = mp.quad(integrand, _breakpoints(R), error=True, maxdegree=12)
    return value, err, scale


def compute_moments(
    W: ComplexPolynomial,
    n: int,
    contour: Tuple[int, int] = (1, 2),
    precision_digits: Optional[int] = None,
    hinge: complex = 0j,
    workers: int = 1,
    coefficients: Optional[Sequence[ExactCoefficient]] = None,
) -> MomentTable:
    """
    mu_k = integral over the contour of z**k exp(-n W(z)) dz, k = 0..2n

    The contour enters from sector ``contour[0]`` and leaves into sector
    ``contour[1]``: mu_k = (ray integral to sector j) - (ray integral to sector i).
    ``coefficients`` gives W exactly (ascending); otherwise the float
    coefficients of W are taken at their binary value.

    Raises:
        PrecisionExhausted: If a ray integral misses the requested precision
    """
    digits = precision_digits or settings.PRECISION_DIGITS
    if digits < 50:
        raise ValueError("precision_digits must be at least 50")
    i, j = contour
    phis = algebra_service.sector_bisectors(W)
    if i == j or not (0 <= i < len(phis) and 0 <= j < len(phis)):
        raise ValueError(f"contour must join two distinct sectors among 0..{len(phis) - 1}")

    k_max = 2 * n
    coeffs = tuple(coefficients) if coefficients is not None else exact_coefficients(W)
    if len(coeffs) != len(W.coeffs):
        raise ValueError("exact coefficients do not match the degree of W")
    workers = max(1, min(workers, settings.SCURVE_THREADS))
    jobs = []
    for sector in (i, j):
        R = truncation_radius(W, n, phis[sector], complex(hinge), digits, k_max)
        jobs.extend((coeffs, n, k, complex(hinge), phis[sector], R, digits) for k in range(k_max + 1))

    logger.info("computing %d ray moments at %d digits", len(jobs), digits)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_ray_moment, jobs))
    else:
        results = [_ray_moment(job) for job in jobs]

    tolerance = mp.mpf(10) ** (-digits)
    moments = []
    with mp.workdps(digits + GUARD_DIGITS):
        for k in range(k_max + 1):
            (v_in, e_in, s_in), (v_out, e_out, s_out) = results[k], results[k_max + 1 + k]
            if e_in > tolerance * max(abs(v_in), s_in) or e_out > tolerance * max(abs(v_out), s_out):
                raise PrecisionExhausted(
                    f"moment {k} misses the requested precision",
                    {"k": k, "error": mp.nstr(max(e_in, e_out), 5), "digits": digits},
                )
            moments.append(v_out - v_in)

    return MomentTable(n=n, moments=tuple(moments), precision_digits=digits, contour=(i, j))


def cubic_moments(
    t: complex,
    n: int,
    contour: Tuple[int, int] = (1, 2),
    precision_digits: Optional[int] = None,
    hinge: complex = 0j,
    workers: int = 1,
) -> MomentTable:
    return compute_moments(
        onecut_service.cubic_potential(t), n, contour, precision_digits, hinge, workers, cubic_coefficients(t)
    )


def recurrence_from_moments(m: MomentTable, degree: Optional[int] = None) -> RecurrenceCoefficients:
    """
    Chebyshev algorithm on the mixed moments sigma_{k,l} = integral of p_k z**l

    Raises:
        DegenerateHankelMinor: If some sigma_{k,k} vanishes to working precision
    """
    n = degree or m.n
    digits = m.precision_digits
    if len(m.moments) < 2 * n:
        raise ValueError(f"degree {n} needs {2 * n} moments, table has {len(m.moments)}")

    with mp.workdps(digits + GUARD_DIGITS):
        mu = [mp.mpmathify(x) for x in m.moments]
        L = len(mu)
        threshold = mp.mpf(10) ** (-(digits // 2))
        if abs(mu[0]) == 0:
            raise DegenerateHankelMinor("zeroth moment vanishes", {"degree": 0})

        previous: List[Any] = [mp.mpf(0)] * L
        current = list(mu)
        alpha = [mu[1] / mu[0]]
        beta: List[Any] = []

        for k in range(1, n):
            b_prev = beta[k - 2] if k >= 2 else mp.mpf(0)
            nxt: List[Any] = [None] * L
            for l in range(k, L - k):
                nxt[l] = current[l + 1] - alpha[k - 1] * current[l] - b_prev * previous[l]

            magnitude = max(abs(current[k + 1]), abs(alpha[k - 1] * current[k]), abs(b_prev * previous[k]))
            if abs(nxt[k]) <= threshold * magnitude:
                raise DegenerateHankelMinor(
                    f"orthogonal polynomial of degree {k} does not exist at this precision",
                    {"degree": k, "sigma": mp.nstr(nxt[k], 5)},
                )
            beta.append(nxt[k] / current[k - 1])
            alpha.append(nxt[k + 1] / nxt[k] - current[k] / current[k - 1])
            previous, current = current, nxt

    logger.debug("recurrence computed up to degree %d", n)
    return RecurrenceCoefficients(alpha=tuple(alpha), beta=tuple(beta), mu0=mu[0], precision_digits=digits)


def monic_coefficients(rc: RecurrenceCoefficients, degree: Optional[int] = None) -> List[Any]:
    """Ascending coefficients of monic p_degree built from the recurrence"""
    n = rc.n if degree is None else degree
    if n > rc.n:
        raise ValueError(f"recurrence covers degrees up to {rc.n}")
    with mp.workdps(rc.precision_digits + GUARD_DIGITS):
        p_prev: List[Any] = []
        p = [mp.mpf(1)]
        for j in range(n):
            shifted = [mp.mpf(0)] + p
            nxt = [shifted[i] - (rc.alpha[j] * p[i] if i < len(p) else 0) for i in range(len(shifted))]
            if j >= 1:
                for i, c in enumerate(p_prev):
                    nxt[i] -= rc.beta[j - 1] * c
            p_prev, p = p, nxt
    return p


def evaluate(rc: RecurrenceCoefficients, z: Any, degree: int) -> Tuple[Any, Any]:
    """p_degree(z) and its derivative by running the recurrence"""
    p_prev, p = mp.mpf(0), mp.mpf(1)
    dp_prev, dp = mp.mpf(0), mp.mpf(0)
    for j in range(degree):
        b = rc.beta[j - 1] if j >= 1 else mp.mpf(0)
        p_next = (z - rc.alpha[j]) * p - b * p_prev
        dp_next = p + (z - rc.alpha[j]) * dp - b * dp_prev
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
    return p, dp


def _relative_residual(coeffs: Sequence[Any], z: Any) -> Any:
    value = mp.polyval(list(reversed(coeffs)), z)
    size = sum(abs(c) * abs(z) ** i for i, c in enumerate(coeffs))
    return abs(value) / size if size else abs(value)


def zeros_of_pn(rc: RecurrenceCoefficients, n: Optional[int] = None) -> ZeroSet:
    """
    All zeros of monic p_n by simultaneous iteration, polished by Newton on the recurrence

    Raises:
        RootFindingStalled: If the iteration fails or residuals stay above 10**(-digits/4)
    """
    n = rc.n if n is None else n
    digits = rc.precision_digits
    if n == 0:
        return ZeroSet(zeros=(), max_residual=0.0, precision_digits=digits)

    with mp.workdps(digits + GUARD_DIGITS):
        coeffs = monic_coefficients(rc, n)
        try:
            roots = mp.polyroots(list(reversed(coeffs)), maxsteps=100 + 20 * n, extraprec=2 * digits)
        except mp.NoConvergence as exc:
            raise RootFindingStalled("simultaneous root iteration did not converge", {"degree": n}) from exc

        polished = []
        for root in roots:
            z = mp.mpc(root)
            for _ in range(POLISH_STEPS):
                p, dp = evaluate(rc, z, n)
                if dp == 0:
                    break
                z -= p / dp
            polished.append(z)

        residual = max(_relative_residual(coeffs, z) for z in polished)
        if residual > mp.mpf(10) ** (-(digits // 4)):
            raise RootFindingStalled(
                "zeros do not reach the residual target", {"degree": n, "residual": mp.nstr(residual, 5)}
            )

    polished.sort(key=lambda z: (float(mp.re(z)), float(mp.im(z))))
    return ZeroSet(zeros=tuple(polished), max_residual=float(residual), precision_digits=digits)


def _inner(m: MomentTable, a: Sequence[Any], b: Sequence[Any]) -> Any:
    total, size = mp.mpf(0), mp.mpf(0)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            term = x * y * m.moments[i + j]
            total += term
            size += abs(term)
    return abs(total) / size if size else abs(total)


def orthogonality_residuals(
    m: MomentTable, rc: RecurrenceCoefficients, pairs: Optional[Sequence[Tuple[int, int]]] = None
) -> Dict[str, Any]:
    """
    Relative residuals of the orthogonality conditions

    Returns:
        {"pairs": {"j,k": |<p_j, p_k>|}, "final": [|<p_n, z**k>| for k = 0..n-1]}
    """
    n = rc.n
    if pairs is None:
        top = min(5, n)
        pairs = [(j, k) for j in range(top + 1) for k in range(j) if j + k < 2 * n]

    with mp.workdps(rc.precision_digits + GUARD_DIGITS):
        polys = {d: monic_coefficients(rc, d) for d in {x for pair in pairs for x in pair} | {n}}
        pair_residuals = {f"{j},{k}": float(_inner(m, polys[j], polys[k])) for j, k in pairs}
        final = [float(_inner(m, polys[n], [0] * k + [1])) for k in range(n)]
    return {"pairs": pair_residuals, "final": final}


def zeros_vs_cuts(zs: ZeroSet, cuts: Sequence[np.ndarray], tube_radius: Optional[float] = None) -> ZeroComparison:
    """Distance of each zero to the nearest cut polyline, per-cut counts and the one-sided Hausdorff distance"""
    tube = settings.ZERO_TUBE_RADIUS if tube_radius is None else tube_radius
    z = zs.as_array()
    if z.size == 0 or not cuts:
        return ZeroComparison(
            distances=np.zeros(0),
            nearest_cut=np.zeros(0, dtype=int),
            counts=tuple(0 for _ in cuts),
            hausdorff=0.0,
            details={"tube_radius": tube, "outside_tube": 0},
        )

    table = np.stack([polyline_distance(z, np.asarray(cut, dtype=complex)) for cut in cuts], axis=1)
    nearest = table.argmin(axis=1)
    distances = table[np.arange(z.size), nearest]
    counts = tuple(int((nearest == c).sum()) for c in range(len(cuts)))
    outside = int((distances > tube).sum())
    if outside:
        logger.warning("%d of %d zeros lie farther than %.3g from every cut", outside, z.size, tube)
    return ZeroComparison(
        distances=distances,
        nearest_cut=nearest,
        counts=counts,
        hausdorff=float(distances.max()),
        details={"tube_radius": tube, "outside_tube": outside},
    )
