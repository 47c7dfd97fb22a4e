"""
One-cut endpoint equations, the explicit one-cut G-function and the three
branches beta_k(t) of the cubic model W(z) = z**3/3 - t z.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from core.config import settings
from core.exceptions import BranchCollision, EvaluationAtBranchPoint
from models.polynomial import BranchedRadical, ComplexPolynomial
from models.solutions import CubicBranchPoint, OneCutSolution
from services import algebra_service
from utils.newton import newton_solve

logger = logging.getLogger(__name__)

OMEGA = np.exp(2j * np.pi / 3)
BRANCH_POINT_MODULUS = 3 * 2 ** (-2 / 3)


def cubic_potential(t: complex) -> ComplexPolynomial:
    return ComplexPolynomial((0, -t, 0, 1 / 3))


def gaussian_potential() -> ComplexPolynomial:
    return ComplexPolynomial((0, 0, 0.5))


def cubic_branch_points() -> List[CubicBranchPoint]:
    """The three finite branch points of beta(t), |t_k| = 3 * 2**(-2/3)"""
    return [CubicBranchPoint(t_k=BRANCH_POINT_MODULUS * OMEGA**k, index=k) for k in range(3)]


def _oriented_delta(delta2: complex) -> complex:
    delta = complex(np.sqrt(complex(delta2)))
    if delta.imag < 0 or (delta.imag == 0 and delta.real < 0):
        delta = -delta
    return delta


def make_solution(beta: complex, delta2: complex, branch_k: Optional[int] = None, residual: float = 0.0) -> OneCutSolution:
    delta = _oriented_delta(delta2)
    return OneCutSolution(
        beta=complex(beta),
        delta2=complex(delta2),
        a=complex(beta - delta),
        b=complex(beta + delta),
        branch_k=branch_k,
        residual_norm=residual,
    )


def cubic_betas(t: complex) -> Tuple[complex, complex, complex]:
    """beta_k(t) for k = 0, 1, 2 with principal cube and square roots"""
    t = complex(t)
    root = np.sqrt(complex(0.25 - (t / 3) ** 3))
    cube = complex(0.5 + root) ** (1 / 3)
    betas = []
    for k in range(3):
        delta_k = OMEGA**k * cube
        betas.append(complex(-t / (3 * delta_k) - delta_k))
    return tuple(betas)


def solve_cubic_branch(t: complex, k: int, strict: bool = False) -> OneCutSolution:
    """
    One-cut solution of the cubic model on branch k

    Args:
        t: Coupling
        k: Branch index in {0, 1, 2}
        strict: Raise instead of warning when two branches coincide

    Returns:
        OneCutSolution with delta**2 = 2 / beta

    Raises:
        BranchCollision: If strict and two branch values coincide within 1e-10
    """
    if k not in (0, 1, 2):
        raise ValueError(f"branch index must be 0, 1 or 2, got {k}")

    betas = cubic_betas(t)
    beta = betas[k]
    for j in range(3):
        if j != k and abs(betas[j] - beta) < 1e-10:
            message = f"branches {k} and {j} coincide at t={t}"
            if strict:
                raise BranchCollision(message, {"t": [complex(t).real, complex(t).imag], "k": k, "j": j})
            logger.warning(message)

    residual = abs(beta**3 - t * beta + 1)
    return make_solution(beta, 2 / beta, branch_k=k, residual=residual)


def follow_branch_on_circle(radius: float, k_start: int, start_angle: float = 0.005, step: float = 0.01, turns: float = 1.0) -> List[Tuple[float, int]]:
    """
    Continue a root of beta**3 - t beta + 1 = 0 around |t| = radius

    Returns:
        List of (angle, principal branch label matching the continued root)
    """
    angles = start_angle + step * np.arange(int(round(2 * np.pi * turns / step)) + 1)
    beta = cubic_betas(radius * np.exp(1j * angles[0]))[k_start]
    labels = []
    for theta in angles:
        t = radius * np.exp(1j * theta)
        roots = np.roots([1, 0, -t, 1])
        beta = complex(roots[np.argmin(np.abs(roots - beta))])
        principal = cubic_betas(t)
        labels.append((float(theta), int(np.argmin([abs(p - beta) for p in principal]))))
    return labels


def endpoint_equations(W: ComplexPolynomial, beta: complex, delta2: complex) -> np.ndarray:
    """
    Coefficients of y**2 - W'**2 at z**N and z**(N-1), the latter shifted by
    4 (N+1) t_{N+1}; both vanish at a one-cut solution
    """
    N = W.degree - 1
    delta = np.sqrt(complex(delta2))
    rad = BranchedRadical((beta - delta, beta + delta))
    dW = W.deriv()
    h = algebra_service.oplus_part(dW, rad)
    y2 = h * h * ComplexPolynomial((beta**2 - delta2, -2 * beta, 1))
    diff = y2 - dW * dW
    return np.array([diff.coefficient(N), diff.coefficient(N - 1) + 4 * (N + 1) * W.leading])


def solve_onecut_general(W: ComplexPolynomial, initial: OneCutSolution, max_iter: int = 50) -> OneCutSolution:
    """
    Newton solution of the one-cut endpoint equations in (beta, delta**2)

    Args:
        W: Potential of degree N + 1 >= 2
        initial: Starting guess

    Returns:
        Converged OneCutSolution

    Raises:
        NoConvergence: After max_iter iterations
        SingularJacobian: If the Jacobian degenerates
    """
    if W.degree < 2:
        raise ValueError("potential must have degree at least 2")

    def F(x: np.ndarray) -> np.ndarray:
        return endpoint_equations(W, x[0], x[1])

    x0 = np.array([initial.beta, initial.delta2], dtype=complex)
    x, norm, iterations = newton_solve(F, x0, tol=settings.TOL_NEWTON, max_iter=max_iter, epsilon=1e-7, damping=True)
    logger.debug("one-cut Newton converged in %d iterations (residual %.2e)", iterations, norm)
    return make_solution(x[0], x[1], branch_k=initial.branch_k, residual=norm)


def radical_of(sol: OneCutSolution) -> BranchedRadical:
    return BranchedRadical((sol.a, sol.b))


def _on_chord(z: complex, a: complex, b: complex, eps: float) -> bool:
    d = b - a
    s = ((z - a) / d).real
    if s <= 0 or s >= 1:
        return False
    return abs(z - (a + s * d)) < eps


def g_onecut(z: complex, W: ComplexPolynomial, sol: OneCutSolution, w: Optional[complex] = None) -> complex:
    """
    G(z) = Q w - 2 Log((z - beta + w)/(a - b)) - log 4 with Q = (W / w)_+

    G(a) = 0 and G(b) = 2 pi i, the limit from the + side (left of a -> b)
    where y_+ / (2 pi i) is the positive density. ``w`` may carry a value
    continued along a path; by default the chord branch is used.

    Raises:
        EvaluationAtBranchPoint: If z lies on the chord (a, b)
    """
    z = complex(z)
    rad = radical_of(sol)
    eps = rad.eps_root
    if w is None:
        if abs(z - sol.a) < eps:
            return 0j
        if abs(z - sol.b) < eps:
            return 2j * np.pi
        if _on_chord(z, sol.a, sol.b, eps):
            raise EvaluationAtBranchPoint(
                "G evaluated on the cut", {"z": [z.real, z.imag]}
            )
        w = complex(algebra_service.chord_branch(rad, z))
    Q = algebra_service.oplus_part(W, rad)
    return complex(Q(z) * w - 2 * np.log((z - sol.beta + w) / (sol.a - sol.b)) - np.log(4))


def g_cubic_at_minus_beta(t: complex, k: int) -> complex:
    """
    G_k(-beta_k) in closed form; its real part vanishes on the phase boundaries

    -(1/3) s (2 beta**2 + delta**2) - 2 Log((-2 beta + s)/(a - b)) - log 4,
    s = w(-beta) on the chord branch.
    """
    sol = solve_cubic_branch(t, k)
    beta, delta2 = sol.beta, sol.delta2
    s = complex(algebra_service.chord_branch(radical_of(sol), -beta))
    return complex(
        -(s * (2 * beta**2 + delta2)) / 3
        - 2 * np.log((-2 * beta + s) / (sol.a - sol.b))
        - np.log(4)
    )


def phase_indicator(t: complex, k: int) -> float:
    return g_cubic_at_minus_beta(t, k).real
