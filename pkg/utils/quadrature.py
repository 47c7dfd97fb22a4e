"""
Quadrature along straight segments whose endpoints may carry inverse
square-root singularities.

Each half of the segment is mapped by z = e + (m - e) v**2 with e the
endpoint and m the midpoint, which turns a 1/sqrt(z - e) singularity into a
smooth integrand in v.
"""
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad_vec

from core.config import settings
from core.exceptions import QuadratureFailure

VectorIntegrand = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=32)
def gauss_legendre_unit(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]"""
    x, w = np.polynomial.legendre.leggauss(nodes)
    return (x + 1) / 2, w / 2


def _half_integral(
    integrand: VectorIntegrand, e: complex, m: complex, tol: float, nodes: Optional[int]
) -> np.ndarray:
    scale = m - e

    if nodes is not None:
        v, wv = gauss_legendre_unit(nodes)
        z = e + scale * v**2
        values = np.asarray(integrand(z), dtype=complex)
        return values @ (wv * 2 * scale * v)

    def f(v: float) -> np.ndarray:
        z = np.array([e + scale * v * v])
        values = np.asarray(integrand(z), dtype=complex)[:, 0] * (2 * scale * v)
        return np.concatenate([values.real, values.imag])

    res, err, info = quad_vec(f, 0.0, 1.0, epsabs=tol, epsrel=tol, norm="max", limit=2000, full_output=True)
    if not info.success:
        raise QuadratureFailure(
            "adaptive quadrature did not reach the requested tolerance",
            {"start": [e.real, e.imag], "end": [m.real, m.imag], "error": float(err), "tolerance": tol},
        )
    k = len(res) // 2
    return res[:k] + 1j * res[k:]


def segment_integral(
    integrand: VectorIntegrand,
    start: complex,
    end: complex,
    tol: Optional[float] = None,
    nodes: Optional[int] = None,
) -> np.ndarray:
    """
    Integrate a vector of functions along the straight segment start -> end

    Args:
        integrand: Maps an array of points (m,) to values of shape (K, m)
        start: Segment start
        end: Segment end
        tol: Adaptive tolerance (default TOL_QUAD)
        nodes: Use a fixed Gauss-Legendre rule with this many nodes per half instead

    Returns:
        Array of K complex integrals

    Raises:
        QuadratureFailure: If adaptive refinement does not reach tol
    """
    tol = settings.TOL_QUAD if tol is None else tol
    start, end = complex(start), complex(end)
    mid = (start + end) / 2
    first = _half_integral(integrand, start, mid, tol, nodes)
    second = _half_integral(integrand, end, mid, tol, nodes)
    return first - second
