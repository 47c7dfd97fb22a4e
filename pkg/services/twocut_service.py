"""
Two-cut endpoint system of the cubic model W(z) = z**3/3 - t z.

Unknowns a, b, c (d = -a - b - c); equations
    e3(a, b, c, d) = 4,   e2(a, b, c, d) = -2 t,
    integral over the gap b -> c of y dz = i r,
with r the real period constant built from the integrals
    A_n = int_b^c z**n / y dz,   B_n = int_a^b z**n / y(z+) dz.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.config import settings
from core.exceptions import (
    ContinuationStalled,
    DegeneratePeriodRatio,
    EndpointCollision,
    NoConvergence,
    QuadratureFailure,
    SCurveError,
    SingularJacobian,
)
from models.polynomial import BranchedRadical
from models.solutions import TwoCutSolution
from services import abelian_service, algebra_service, onecut_service, stokes_service
from utils.newton import newton_solve as newton_iteration
from utils.quadrature import segment_integral

logger = logging.getLogger(__name__)

COLLISION_DISTANCE = 1e-6
SEED_AMPLITUDES = (0.3, 0.1, 0.03, 0.01, 0.003)
_RECOVERABLE = (NoConvergence, SingularJacobian, EndpointCollision, DegeneratePeriodRatio, QuadratureFailure)


def normalize_labels(endpoints: Sequence[complex]) -> Tuple[complex, complex, complex, complex]:
    """
    Order a chain (a, b | gap | c, d) so that cut (a, b) has the lower midpoint

    Reversing the chain keeps the gap between the second and third endpoint.
    """
    a, b, c, d = (complex(e) for e in endpoints)
    if ((a + b) / 2).imag > ((c + d) / 2).imag:
        return d, c, b, a
    return a, b, c, d


def _key(sol: TwoCutSolution) -> Tuple[complex, ...]:
    return tuple(complex(e) for e in sol.endpoints)


def cubic_period_table(sol: TwoCutSolution, nodes: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Arrays (A_0..A_4, B_0..B_4)"""
    e = _key(sol)
    gap = abelian_service.monomial_integrals(e, "gap", 1, 4, nodes)
    cut = abelian_service.monomial_integrals(e, "cut", 0, 4, nodes)
    return gap, cut


def cubic_periods(sol: TwoCutSolution, n: int, nodes: Optional[int] = None) -> Tuple[complex, complex]:
    """
    (A_n, B_n) for 0 <= n <= 4

    Raises:
        QuadratureFailure: If adaptive refinement does not reach TOL_QUAD
    """
    if not 0 <= n <= 4:
        raise ValueError("period order must lie in 0..4")
    gap, cut = cubic_period_table(sol, nodes)
    return complex(gap[n]), complex(cut[n])


def compute_r(sol: TwoCutSolution, t: complex, nodes: Optional[int] = None) -> float:
    """
    r = Re(B4 - 2t B2 - 4 B1 + C B0) / Im(B0 / A0), C = (-A4 + 2t A2 + 4 A1) / A0

    Raises:
        DegeneratePeriodRatio: If |Im(B0 / A0)| < 1e-12
    """
    A, B = cubic_period_table(sol, nodes)
    if A[0] == 0:
        raise DegeneratePeriodRatio("gap period A_0 vanishes", {"t": [complex(t).real, complex(t).imag]})
    ratio = (B[0] / A[0]).imag
    if abs(ratio) < 1e-12:
        raise DegeneratePeriodRatio("Im(B_0 / A_0) vanishes", {"ratio": float(ratio)})
    C = (-A[4] + 2 * t * A[2] + 4 * A[1]) / A[0]
    return float((B[4] - 2 * t * B[2] - 4 * B[1] + C * B[0]).real / ratio)


def gap_integral(sol: TwoCutSolution, nodes: Optional[int] = None) -> complex:
    """Integral of y over the gap chord b -> c (chord branch, y ~ z**2)"""
    rad = BranchedRadical(_key(sol))
    value = segment_integral(lambda z: algebra_service.chord_branch(rad, z)[None, :], sol.b, sol.c, nodes=nodes)
    return complex(value[0])


def residual(t: complex, sol: TwoCutSolution, nodes: Optional[int] = None) -> np.ndarray:
    """
    Real and imaginary parts of (e3 - 4), (e2 + 2t), e1 and (gap integral - i r)

    Returns:
        Array of 8 reals
    """
    e = np.array(_key(sol))
    e1 = e.sum()
    e2 = sum(e[i] * e[j] for i in range(4) for j in range(i + 1, 4))
    e3 = sum(e[i] * e[j] * e[k] for i in range(4) for j in range(i + 1, 4) for k in range(j + 1, 4))
    r = compute_r(sol, t, nodes)
    period = gap_integral(sol, nodes) - 1j * r
    values = [e3 - 4, e2 + 2 * t, e1, period]
    return np.array([v for z in values for v in (complex(z).real, complex(z).imag)])


def _unpack(x: np.ndarray) -> TwoCutSolution:
    a, b, c = x[0] + 1j * x[1], x[2] + 1j * x[3], x[4] + 1j * x[5]
    return TwoCutSolution(a=a, b=b, c=c, d=-a - b - c)


def _check_collision(sol: TwoCutSolution) -> None:
    separation = sol.min_separation()
    if separation < COLLISION_DISTANCE:
        raise EndpointCollision(
            "two endpoints approach each other (close to a phase boundary)",
            {"separation": separation, "endpoints": [[z.real, z.imag] for z in sol.endpoints]},
        )


def newton_solve(t: complex, initial: TwoCutSolution, nodes: Optional[int] = None) -> TwoCutSolution:
    """
    Solve the two-cut system at t starting from ``initial``

    Raises:
        NoConvergence: After MAX_NEWTON_ITER damped iterations
        SingularJacobian: If the finite-difference Jacobian degenerates
        EndpointCollision: If two endpoints come within 1e-6
    """
    t = complex(t)
    a, b, c, _ = normalize_labels(initial.endpoints)
    x0 = np.array([a.real, a.imag, b.real, b.imag, c.real, c.imag])
    scale = max(1.0, max(abs(e) for e in initial.endpoints))
    _check_collision(initial)

    def F(x: np.ndarray) -> np.ndarray:
        full = residual(t, _unpack(x), nodes)
        return np.delete(full, [4, 5])

    x, norm, iterations = newton_iteration(
        F,
        x0,
        tol=settings.TOL_NEWTON,
        max_iter=settings.MAX_NEWTON_ITER,
        epsilon=settings.FD_STEP * scale,
        guard=lambda x: _check_collision(_unpack(x)),
    )
    endpoints = normalize_labels(_unpack(x).endpoints)
    sol = TwoCutSolution.from_endpoints(endpoints, t=t)
    r = compute_r(sol, t, nodes)
    logger.debug("two-cut Newton at t=%s converged in %d iterations (residual %.2e)", t, iterations, norm)
    return sol.with_values(r=r, residual_norm=norm)


def _double_root_axes(t: complex, k: int) -> Tuple[complex, List[float]]:
    sol = onecut_service.solve_cubic_branch(t, k)
    curve = stokes_service.curve_from_onecut(onecut_service.cubic_potential(t), sol)
    alpha = -sol.beta
    return alpha, stokes_service.initial_directions(curve.y2, alpha, multiplicity=2)


def _try_seeds(t: complex, candidates: List[Tuple[complex, ...]]) -> TwoCutSolution:
    last_error: Optional[SCurveError] = None
    for endpoints in candidates:
        try:
            return newton_solve(t, TwoCutSolution.from_endpoints(endpoints))
        except _RECOVERABLE as exc:
            logger.debug("seed %s rejected: %s", endpoints, exc.detail)
            last_error = exc
    raise NoConvergence(
        f"no two-cut seed converged at t={t}",
        {"attempts": len(candidates), "last_error": last_error.code if last_error else None},
    )


def split_seed_candidates(t: complex, k: int = 0) -> List[Tuple[complex, ...]]:
    """
    Seeds for the splitting of the one-cut cut at the double root alpha = -beta

    a, d are the one-cut endpoints and b, c = alpha -/+ eps e^{i theta}; theta runs
    over the double-root Stokes directions, those pointing towards d first.
    """
    sol = onecut_service.solve_cubic_branch(t, k)
    alpha, directions = _double_root_axes(t, k)
    towards = sol.b - alpha
    directions = sorted(directions, key=lambda th: -(np.exp(1j * th) * np.conj(towards)).real)
    seeds = []
    for theta in directions[:2]:
        for eps in SEED_AMPLITUDES:
            shift = eps * np.exp(1j * theta)
            seeds.append(normalize_labels((sol.a, alpha - shift, alpha + shift, sol.b)))
    return seeds


def birth_seed_candidates(t: complex, k: int) -> List[Tuple[complex, ...]]:
    """
    Seeds for a new cut born at the double root away from the existing cut

    The gap joins the new pair to the nearer endpoint of the one-cut cut.
    """
    sol = onecut_service.solve_cubic_branch(t, k)
    alpha, directions = _double_root_axes(t, k)
    seeds = []
    for theta in directions[:2]:
        for eps in SEED_AMPLITUDES:
            u, v = alpha - eps * np.exp(1j * theta), alpha + eps * np.exp(1j * theta)
            options = []
            for p, q in ((sol.a, sol.b), (sol.b, sol.a)):
                for x, y in ((u, v), (v, u)):
                    options.append((abs(q - x), (p, q, x, y)))
            seeds.append(normalize_labels(min(options, key=lambda o: o[0])[1]))
    return seeds


def solve_from_split(t: complex, k: int = 0) -> TwoCutSolution:
    return _try_seeds(t, split_seed_candidates(t, k))


def solve_from_birth(t: complex, k: int) -> TwoCutSolution:
    return _try_seeds(t, birth_seed_candidates(t, k))


def _advance(t_from: complex, t_to: complex, sol: TwoCutSolution, max_step: float) -> TwoCutSolution:
    t_cur = complex(t_from)
    h = min(max_step, abs(t_to - t_from))
    while abs(t_to - t_cur) > 0:
        remaining = t_to - t_cur
        t_try = t_to if abs(remaining) <= h else t_cur + h * remaining / abs(remaining)
        try:
            sol = newton_solve(t_try, sol)
            t_cur = t_try
            h = min(2 * h, max_step)
        except _RECOVERABLE as exc:
            h /= 2
            logger.warning("continuation step halved to %.3g at t=%s (%s)", h, t_cur, exc.code)
            if h < settings.MIN_CONTINUATION_STEP:
                raise ContinuationStalled(
                    "two-cut continuation stalled",
                    {"t": [t_cur.real, t_cur.imag], "target": [complex(t_to).real, complex(t_to).imag], "reason": exc.code},
                ) from exc
    return sol


def continue_in_t(path: Sequence[complex], seed: TwoCutSolution, max_step: Optional[float] = None) -> List[TwoCutSolution]:
    """
    Follow a two-cut solution along a path of t values

    Args:
        path: t values; the first one is where ``seed`` is (approximately) a solution
        seed: Starting configuration
        max_step: Largest accepted increment in t (default MAX_CONTINUATION_STEP)

    Returns:
        One converged solution per path point

    Raises:
        ContinuationStalled: If the step falls below MIN_CONTINUATION_STEP
    """
    max_step = max_step or settings.MAX_CONTINUATION_STEP
    path = [complex(t) for t in path]
    sol = newton_solve(path[0], seed)
    solutions = [sol]
    for t_prev, t_next in zip(path[:-1], path[1:]):
        sol = _advance(t_prev, t_next, sol, max_step)
        solutions.append(sol)
    return solutions


def cut_charges(sol: TwoCutSolution) -> Tuple[float, float]:
    """Charges of cut (a, b) and cut (c, d) from y(z+) on the chords, normalized to a positive total"""
    rad = BranchedRadical(_key(sol))
    raw = []
    for j, (p, q) in enumerate(rad.pairs):
        value = segment_integral(lambda z, j=j: algebra_service.boundary_value(rad, z, j)[None, :], p, q)
        raw.append(complex(value[0]) / (2j * np.pi))
    sign = 1.0 if sum(raw).real >= 0 else -1.0
    return sign * raw[0].real, sign * raw[1].real


def conjugate_solution(sol: TwoCutSolution) -> TwoCutSolution:
    """Solution at conj(t) obtained by conjugating the endpoints"""
    endpoints = normalize_labels([complex(e).conjugate() for e in sol.endpoints])
    t = None if sol.t is None else complex(sol.t).conjugate()
    return TwoCutSolution.from_endpoints(endpoints, t=t, residual_norm=sol.residual_norm)


def rotate_solution(sol: TwoCutSolution, m: int = 1) -> TwoCutSolution:
    """Solution at omega**m t, omega = exp(2 pi i / 3); endpoints scale by omega**(-m)"""
    factor = onecut_service.OMEGA ** (-m)
    endpoints = normalize_labels([complex(e) * factor for e in sol.endpoints])
    t = None if sol.t is None else complex(sol.t) * onecut_service.OMEGA**m
    return TwoCutSolution.from_endpoints(endpoints, t=t, residual_norm=sol.residual_norm)


class TwoCutCatalogue:
    """
    Solved two-cut configurations indexed by t

    New configurations are obtained by continuation from the nearest stored
    one, including its images under t -> conj(t) and t -> omega t.
    """

    def __init__(self, use_symmetries: bool = True):
        self._entries: Dict[complex, TwoCutSolution] = {}
        self.use_symmetries = use_symmetries

    def __len__(self) -> int:
        return len(self._entries)

    def add(self, sol: TwoCutSolution) -> None:
        if sol.t is None:
            raise ValueError("catalogued solutions must carry their t")
        self._entries[complex(sol.t)] = sol

    def _candidates(self) -> List[TwoCutSolution]:
        stored = list(self._entries.values())
        if not self.use_symmetries:
            return stored
        images = []
        for sol in stored:
            images.append(conjugate_solution(sol))
            images.append(rotate_solution(sol, 1))
            images.append(rotate_solution(sol, 2))
        return stored + images

    def nearest(self, t: complex) -> TwoCutSolution:
        if not self._entries:
            raise ValueError("catalogue is empty")
        return min(self._candidates(), key=lambda s: abs(complex(s.t) - t))

    def solve_at(self, t: complex) -> TwoCutSolution:
        t = complex(t)
        if t in self._entries:
            return self._entries[t]
        seed = self.nearest(t)
        sol = continue_in_t([complex(seed.t), t], seed)[-1]
        self.add(sol)
        return sol

    @classmethod
    def seeded(
        cls,
        t_split: complex = -1.02,
        targets: Sequence[complex] = (-1.1,),
        births: Sequence[Tuple[complex, int]] = ((-1.5 + 1.5j, 1),),
    ) -> "TwoCutCatalogue":
        """
        Catalogue started from the splitting of the branch-0 cut on the negative real axis

        ``births`` adds (t, k) configurations grown from the double root of one-cut
        branch k just past its boundary; a birth seed that fails is logged and skipped.
        """
        catalogue = cls()
        sol = solve_from_split(t_split, 0)
        catalogue.add(sol)
        for t_birth, k in births:
            try:
                catalogue.add(solve_from_birth(t_birth, k))
            except _RECOVERABLE as exc:
                logger.warning("birth seed at t=%s on branch %d not used: %s", t_birth, k, exc.detail)
        for target in targets:
            catalogue.solve_at(target)
        return catalogue
