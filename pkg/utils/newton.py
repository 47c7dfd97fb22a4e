"""
Finite-difference Newton iteration shared by the endpoint solvers
"""
import logging
from typing import Callable

import numpy as np

from core.config import settings
from core.exceptions import NoConvergence, SingularJacobian

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e14


def get_jacobian(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, epsilon: float) -> np.ndarray:
    """
    Central-difference Jacobian J_ij = df_i/dx_j

    Works for real vectors and, for holomorphic f, for complex vectors
    (the complex derivative is then recovered column by column).
    """
    x = np.array(x)
    n = len(x)
    f0 = np.asarray(f(x))
    J = np.zeros((len(f0), n), dtype=np.result_type(f0, x))

    for i in range(n):
        x_plus = x.copy()
        x_minus = x.copy()
        x_plus[i] += epsilon
        x_minus[i] -= epsilon
        J[:, i] = (np.asarray(f(x_plus)) - np.asarray(f(x_minus))) / (2 * epsilon)

    return J


def newton_solve(
    F: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    tol: float | None = None,
    max_iter: int | None = None,
    epsilon: float | None = None,
    damping: bool = True,
    guard: Callable[[np.ndarray], None] | None = None,
) -> tuple[np.ndarray, float, int]:
    """
    Damped Newton iteration for F(x) = 0

    Args:
        F: Residual function
        x0: Initial guess
        tol: Residual norm target (default TOL_NEWTON)
        max_iter: Iteration budget (default MAX_NEWTON_ITER)
        epsilon: Finite-difference step (default FD_STEP)
        damping: Halve the step while the residual norm does not decrease
        guard: Called on every accepted iterate; may raise to abort

    Returns:
        Tuple of (solution, residual norm, iterations used)

    Raises:
        SingularJacobian: If the Jacobian is singular or numerically so
        NoConvergence: If the budget is exhausted
    """
    tol = settings.TOL_NEWTON if tol is None else tol
    max_iter = settings.MAX_NEWTON_ITER if max_iter is None else max_iter
    epsilon = settings.FD_STEP if epsilon is None else epsilon

    x = np.array(x0)
    fx = np.asarray(F(x))
    norm = float(np.linalg.norm(fx))

    for iteration in range(max_iter):
        if norm < tol:
            return x, norm, iteration

        J = get_jacobian(F, x, epsilon)
        try:
            if np.linalg.cond(J) > MAX_CONDITION:
                raise np.linalg.LinAlgError("condition number too large")
            delta_x = np.linalg.solve(J, -fx)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(
                f"Jacobian is singular at iteration {iteration}",
                {"iteration": iteration, "residual_norm": norm, "reason": str(exc)},
            ) from exc

        lam = 1.0
        while True:
            x_new = x + lam * delta_x
            f_new = np.asarray(F(x_new))
            norm_new = float(np.linalg.norm(f_new))
            if not damping or norm_new < (1 - 1e-4 * lam) * norm or lam < 1 / 64:
                break
            lam /= 2

        if lam < 1:
            logger.debug("Newton step %d damped to %.4g", iteration, lam)

        x, fx, norm = x_new, f_new, norm_new
        if guard is not None:
            guard(x)
        logger.debug("Newton iteration %d: residual %.3e", iteration, norm)

    if norm < tol:
        return x, norm, max_iter

    raise NoConvergence(
        f"Newton did not converge in {max_iter} iterations",
        {"residual_norm": norm, "max_iter": max_iter},
    )
