"""
Phase structure of the cubic model over the complex t-plane.

Boundaries are the curves Re G_k(-beta_k(t)) = 0; points are labeled by the
first pipeline (one-cut on branch 0, 1, 2, then two-cut) whose cuts are
admissible and prolong into the requested pair of sectors.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from core.config import settings
from core.exceptions import ContinuationStalled, NoConvergence, NoSignChange, SCurveError, Unclassified
from models.phase import PhaseBoundary, PhaseKind, PhaseLabel, SCurveConfiguration, TransitionEvent, TransitionKind
from services import onecut_service, stokes_service, twocut_service
from utils.geometry import polyline_distance

logger = logging.getLogger(__name__)

# Ray carrying the critical point of each beta-branch (images of t_c under t -> omega t)
RAY_FOR_BRANCH = {0: np.pi, 1: np.pi / 3, 2: 5 * np.pi / 3}
DASHED_CUT_ANGLES = (0.0, 2 * np.pi / 3, -2 * np.pi / 3)
BOUNDARY_TOLERANCE = 1e-4

_catalogue: Optional[twocut_service.TwoCutCatalogue] = None


def default_catalogue() -> twocut_service.TwoCutCatalogue:
    global _catalogue
    if _catalogue is None:
        _catalogue = twocut_service.TwoCutCatalogue.seeded()
    return _catalogue


def boundary_function(t: complex, k: int) -> float:
    return onecut_service.phase_indicator(t, k)


def boundary_gradient(t: complex, k: int, h: float = 1e-6) -> complex:
    """dF/dx + i dF/dy by central differences of the real indicator"""
    fx = (boundary_function(t + h, k) - boundary_function(t - h, k)) / (2 * h)
    fy = (boundary_function(t + 1j * h, k) - boundary_function(t - 1j * h, k)) / (2 * h)
    return complex(fx, fy)


def critical_t_on_ray(k: int, theta: float, bracket: Tuple[float, float] = (0.2, 1.8), xtol: float = 1e-10) -> complex:
    """
    Root of |t| -> Re G_k(-beta_k(|t| e^{i theta})) inside the bracket

    Raises:
        NoSignChange: If the indicator has the same sign at both bracket ends
    """
    direction = np.exp(1j * theta)

    def f(rho: float) -> float:
        return boundary_function(rho * direction, k)

    lo, hi = bracket
    f_lo, f_hi = f(lo), f(hi)
    if f_lo * f_hi > 0:
        raise NoSignChange(
            "phase indicator does not change sign on the bracket",
            {"k": k, "theta": theta, "bracket": list(bracket), "values": [f_lo, f_hi]},
        )
    rho = brentq(f, lo, hi, xtol=xtol)
    return complex(rho * direction)


def _correct(t: complex, k: int, tol: float = 1e-12, max_iter: int = 20) -> complex:
    for _ in range(max_iter):
        F = boundary_function(t, k)
        if abs(F) < tol:
            return t
        g = boundary_gradient(t, k)
        t = t - F * g / abs(g) ** 2
    raise NoConvergence("boundary corrector did not converge", {"t": [t.real, t.imag], "k": k})


def _crosses_dashed_cut(t_old: complex, t_new: complex) -> bool:
    radius = onecut_service.BRANCH_POINT_MODULUS
    for phi in DASHED_CUT_ANGLES:
        u_old, u_new = t_old * np.exp(-1j * phi), t_new * np.exp(-1j * phi)
        if u_old.imag * u_new.imag < 0:
            s = u_old.imag / (u_old.imag - u_new.imag)
            if (u_old + s * (u_new - u_old)).real > radius:
                return True
    return False


def _trace_direction(
    k: int, seed: complex, sign: float, step: float, max_points: int, radius: float
) -> Tuple[List[complex], bool, str]:
    points = [seed]
    g = boundary_gradient(seed, k)
    tangent = sign * 1j * g / abs(g)
    t = seed
    h = step

    while len(points) < max_points:
        try:
            t_new = _correct(t + h * tangent, k)
        except NoConvergence:
            h /= 2
            if h < settings.MIN_CONTINUATION_STEP:
                raise ContinuationStalled("phase boundary continuation stalled", {"t": [t.real, t.imag], "k": k})
            continue

        if _crosses_dashed_cut(t, t_new):
            return points, False, "branch cut"
        if abs(t_new) > radius:
            return points, False, "bounding box"
        if len(points) > 10 and abs(t_new - seed) < 1.5 * step:
            points.append(seed)
            return points, True, "closed"

        g = boundary_gradient(t_new, k)
        new_tangent = 1j * g / abs(g)
        if (new_tangent * np.conj(tangent)).real < 0:
            new_tangent = -new_tangent
        points.append(t_new)
        t, tangent = t_new, new_tangent
        h = min(2 * h, step)

    return points, False, "max points"


def trace_boundary(k: int, seed_t: complex, step: float = 0.02, max_points: int = 2000, radius: float = 6.0) -> PhaseBoundary:
    """
    Pseudo-arclength continuation of Re G_k(-beta_k(t)) = 0 from a seed

    Stops on the dashed cuts (|t| > 3 * 2**(-2/3), arg t in {0, +-2pi/3}),
    on closing a loop, or on leaving |t| <= radius.

    Raises:
        ContinuationStalled: If the corrector keeps failing below MIN_CONTINUATION_STEP
    """
    seed = _correct(complex(seed_t), k, tol=1e-12)
    forward, closed, reason = _trace_direction(k, seed, 1.0, step, max_points, radius)
    if closed:
        return PhaseBoundary(branch_k=k, polyline=np.array(forward), closed=True, stop_reason=reason)

    backward, _, back_reason = _trace_direction(k, seed, -1.0, step, max_points, radius)
    polyline = np.array(backward[::-1] + forward[1:])
    return PhaseBoundary(branch_k=k, polyline=polyline, closed=False, stop_reason=f"{back_reason}/{reason}")


def trace_all_boundaries(step: float = 0.02, max_points: int = 2000) -> Dict[int, Tuple[complex, PhaseBoundary]]:
    """Critical point and traced boundary of every branch; branches whose seed or trace fails are skipped"""
    traced = {}
    for k, theta in RAY_FOR_BRANCH.items():
        try:
            seed = critical_t_on_ray(k, theta)
            traced[k] = (seed, trace_boundary(k, seed, step, max_points))
        except SCurveError as exc:
            logger.warning("boundary of branch %d not traced: %s", k, exc.detail)
    return traced


def near_boundary(t: complex, tol: float = BOUNDARY_TOLERANCE) -> Optional[int]:
    """Branch whose boundary passes closest to t, if within ~tol (first-order distance estimate)"""
    best, best_distance = None, tol
    for k in range(3):
        try:
            F = boundary_function(t, k)
            g = abs(boundary_gradient(t, k))
        except SCurveError:
            continue
        if g > 0 and abs(F) / g < best_distance:
            best, best_distance = k, abs(F) / g
    return best


def find_s_curve(
    t: complex,
    contour_pair: Tuple[int, int] = (1, 2),
    catalogue: Optional[twocut_service.TwoCutCatalogue] = None,
    resolution: Optional[int] = None,
) -> SCurveConfiguration:
    """
    First pipeline (one-cut on branch 0, 1, 2, then two-cut) whose cuts embed into an S-curve for the pair

    Raises:
        Unclassified: If every pipeline fails
    """
    t = complex(t)
    pair = tuple(contour_pair)
    W = onecut_service.cubic_potential(t)
    failures = {}

    for k in range(3):
        try:
            sol = onecut_service.solve_cubic_branch(t, k)
            curve = stokes_service.curve_from_onecut(W, sol)
            graph, cuts, grid, report = stokes_service.analyse_configuration(curve, pair, resolution)
        except SCurveError as exc:
            failures[f"onecut{k}"] = exc.code
            continue
        if report.embeddable:
            label = PhaseLabel(t=t, contour_pair=pair, kind=PhaseKind.ONE_CUT, branch_k=k, evidence=report)
            return SCurveConfiguration(label, sol, graph, tuple(cuts), grid)
        failures[f"onecut{k}"] = report.reason or "not embeddable"

    try:
        sol2 = (catalogue or default_catalogue()).solve_at(t)
        curve = stokes_service.curve_from_twocut(t, sol2)
        graph, cuts, grid, report = stokes_service.analyse_configuration(curve, pair, resolution)
        if report.embeddable:
            label = PhaseLabel(t=t, contour_pair=pair, kind=PhaseKind.TWO_CUT, evidence=report)
            return SCurveConfiguration(label, sol2, graph, tuple(cuts), grid)
        failures["twocut"] = report.reason or "not embeddable"
    except SCurveError as exc:
        failures["twocut"] = exc.code

    raise Unclassified(f"no pipeline produced an S-curve at t={t}", {"t": [t.real, t.imag], "failures": failures})


def classify_t(
    t: complex,
    contour_pair: Tuple[int, int] = (1, 2),
    catalogue: Optional[twocut_service.TwoCutCatalogue] = None,
    resolution: Optional[int] = None,
    check_boundary: bool = True,
) -> PhaseLabel:
    """
    Label t as OneCut(k), TwoCut or Boundary(k) for the contour pair

    Raises:
        Unclassified: If every pipeline fails
    """
    if check_boundary:
        k = near_boundary(complex(t))
        if k is not None:
            return PhaseLabel(t=complex(t), contour_pair=tuple(contour_pair), kind=PhaseKind.BOUNDARY, branch_k=k)
    return find_s_curve(t, contour_pair, catalogue, resolution).label


def _classify_worker(args: Tuple[int, complex, Tuple[int, int], Optional[int]]) -> Tuple[int, str, str, Optional[int]]:
    index, t, pair, resolution = args
    try:
        label = classify_t(t, pair, resolution=resolution)
        return index, label.kind.value, label.label, label.branch_k
    except SCurveError as exc:
        logger.warning("t=%s: %s", t, exc.detail)
        return index, "Unclassified", "Unclassified", None


def classify_grid(
    re_range: Tuple[float, float],
    im_range: Tuple[float, float],
    n: int,
    contour_pair: Tuple[int, int] = (1, 2),
    resolution: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[Tuple[complex, str, Optional[int]]]:
    """
    Classify an n x n raster of t values in parallel

    Returns:
        List of (t, label, branch) in row-major order (imaginary part outer)
    """
    xs = np.linspace(re_range[0], re_range[1], n)
    ys = np.linspace(im_range[0], im_range[1], n)
    points = [complex(x, y) for y in ys for x in xs]
    jobs = [(i, t, tuple(contour_pair), resolution) for i, t in enumerate(points)]

    workers = max(1, min(workers or os.cpu_count() or 1, settings.SCURVE_THREADS))
    logger.info("classifying %d points with %d workers", len(points), workers)

    if workers <= 1:
        results = [_classify_worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_classify_worker, jobs, chunksize=max(1, len(jobs) // (8 * workers))))

    results.sort(key=lambda r: r[0])
    return [(points[i], label, k) for i, _, label, k in results]


def _mechanism(t: complex, k: int) -> str:
    """'cut' when the double root sits on the cut, 'leg' when it sits on a leg"""
    sol = onecut_service.solve_cubic_branch(t, k)
    curve = stokes_service.curve_from_onecut(onecut_service.cubic_potential(t), sol)
    graph = stokes_service.trace_stokes_graph(curve)
    alpha = -sol.beta
    cut = graph.short_between(sol.a, sol.b, 10 * settings.EPS_HIT * curve.scale)
    d_cut = float(polyline_distance(alpha, cut.samples)[0]) if cut is not None else np.inf
    d_leg = min((float(polyline_distance(alpha, leg.samples)[0]) for leg in graph.legs()), default=np.inf)
    logger.debug("double root at %s: distance to cut %.3g, to legs %.3g", alpha, d_cut, d_leg)
    return "cut" if d_cut <= d_leg else "leg"


def _locate(t_one: complex, t_other: complex, k: int) -> complex:
    def f(s: float) -> float:
        return boundary_function(t_one + s * (t_other - t_one), k)

    f0, f1 = f(0.0), f(1.0)
    if f0 * f1 < 0:
        s = brentq(f, 0.0, 1.0, xtol=1e-10)
        return complex(t_one + s * (t_other - t_one))
    return complex((t_one + t_other) / 2)


def _name_transition(t_prev: complex, t_next: complex, before: PhaseLabel, after: PhaseLabel) -> TransitionEvent:
    if before.kind == PhaseKind.ONE_CUT and after.kind == PhaseKind.ONE_CUT:
        return TransitionEvent(TransitionKind.BRANCH_CHANGE, (t_prev + t_next) / 2, before.label, after.label, after.branch_k)

    if before.kind == PhaseKind.ONE_CUT:
        k, t_one, t_other = before.branch_k, t_prev, t_next
        kinds = (TransitionKind.SPLIT, TransitionKind.BIRTH)
    elif after.kind == PhaseKind.ONE_CUT:
        k, t_one, t_other = after.branch_k, t_next, t_prev
        kinds = (TransitionKind.MERGE, TransitionKind.DEATH)
    else:
        return TransitionEvent(TransitionKind.BRANCH_CHANGE, (t_prev + t_next) / 2, before.label, after.label)

    t_event = _locate(t_one, t_other, k)
    offset = t_one - t_event
    t_near = t_event + 1e-3 * offset / abs(offset) if abs(offset) > 1e-3 else t_one
    mechanism = _mechanism(t_near, k)
    kind = kinds[0] if mechanism == "cut" else kinds[1]
    return TransitionEvent(kind, t_event, before.label, after.label, k)


def transition_report(
    path: Sequence[complex],
    contour_pair: Tuple[int, int] = (1, 2),
    labels: Optional[Sequence[PhaseLabel]] = None,
    catalogue: Optional[twocut_service.TwoCutCatalogue] = None,
) -> List[TransitionEvent]:
    """
    Name the phase changes along a path of t values

    Split/Merge when the double root meets the cut, Birth/Death when a cut
    appears or vanishes away from the existing one.
    """
    path = [complex(t) for t in path]
    if labels is None:
        labels = [classify_t(t, contour_pair, catalogue) for t in path]

    events: List[TransitionEvent] = []
    previous: Optional[Tuple[complex, PhaseLabel]] = None
    for t, label in zip(path, labels):
        if label.kind == PhaseKind.BOUNDARY:
            continue
        if previous is not None and not previous[1].same_phase(label):
            event = _name_transition(previous[0], t, previous[1], label)
            logger.info("%s at t=%s (%s -> %s)", event.kind.value, event.t, event.before, event.after)
            events.append(event)
        previous = (t, label)
    return events
