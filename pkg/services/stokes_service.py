"""
Stokes lines of the quadratic differential y(z)**2 dz**2, equilibrium densities
on short lines, sign maps of Re G and S-curve embedding between convergence
sectors.
"""
import itertools
import logging
from collections import Counter, deque
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from core.config import settings
from core.exceptions import InconclusiveResolution, StepCollapse
from models.polynomial import BranchedRadical, ComplexPolynomial
from models.solutions import OneCutSolution, TwoCutSolution
from models.stokes import (
    Critical,
    CutCandidate,
    EmbeddingReport,
    Leg,
    Short,
    SignMap,
    SpectralCurve,
    StokesGraph,
    StokesLine,
)
from services import algebra_service
from utils.quadrature import gauss_legendre_unit

logger = logging.getLogger(__name__)

ReGEvaluator = Callable[[np.ndarray], np.ndarray]


# Spectral curve -----------------------------------------------------------------

def spectral_curve(W: ComplexPolynomial, endpoints: Sequence[complex]) -> SpectralCurve:
    rad = BranchedRadical(tuple(endpoints))
    h = algebra_service.oplus_part(W.deriv(), rad)
    return SpectralCurve(
        W=W,
        h=h,
        radical=rad,
        y2=h * h * rad.square(),
        double_roots=tuple(complex(r) for r in h.roots()),
    )


def curve_from_onecut(W: ComplexPolynomial, sol: OneCutSolution) -> SpectralCurve:
    return spectral_curve(W, (sol.a, sol.b))


def curve_from_twocut(t: complex, sol: TwoCutSolution) -> SpectralCurve:
    W = ComplexPolynomial((0, -t, 0, 1 / 3))
    return spectral_curve(W, sol.endpoints)


def root_multiplicity(y2: ComplexPolynomial, root: complex, rtol: float = 1e-7) -> int:
    """Order of vanishing of y2 at root, judged against the size of each Taylor term"""
    coeffs = np.abs(np.asarray(y2.coeffs))
    r = abs(root)
    for m in range(y2.degree + 1):
        value = abs(y2.deriv(m)(root)) / factorial(m)
        scale = sum(coeffs[i] * comb(i, m) * r ** (i - m) for i in range(m, y2.degree + 1))
        if value > rtol * max(scale, 1e-300):
            return m
    return y2.degree


def _local_coefficient(y2: ComplexPolynomial, root: complex, m: int) -> complex:
    return complex(y2.deriv(m)(root) / factorial(m))


def initial_directions(y2: ComplexPolynomial, root: complex, multiplicity: Optional[int] = None) -> List[float]:
    """
    The m + 2 directions in which Re of the integral of y vanishes to leading order

    With y**2 ~ c (z - root)**m, theta_k = (pi/2 + k pi - arg sqrt(c)) * 2/(m + 2).
    """
    m = root_multiplicity(y2, root) if multiplicity is None else multiplicity
    sqrt_c = np.sqrt(_local_coefficient(y2, root, m))
    angles = [((np.pi / 2 + k * np.pi - np.angle(sqrt_c)) * 2 / (m + 2)) % (2 * np.pi) for k in range(m + 2)]
    return sorted(angles)


# Tracing ------------------------------------------------------------------------

def _segment_distance(p: complex, q: complex, x: complex) -> float:
    d = q - p
    if d == 0:
        return abs(x - p)
    s = min(max(((x - p) / d).real, 0.0), 1.0)
    return abs(x - (p + s * d))


class StokesTracer:
    """
    Predictor-corrector tracing of Re G = 0 level lines starting at a root

    Midpoint predictor along the unit tangent i conj(y)/|y|, G accumulated by
    Simpson's rule, one Newton correction along conj(y) per step.
    """

    def __init__(self, curve: SpectralCurve, eps_hit: Optional[float] = None, max_steps: Optional[int] = None):
        self.curve = curve
        self.y2 = curve.y2
        self.dy2 = curve.y2.deriv()
        self.scale = curve.scale
        self.eps_hit = (settings.EPS_HIT if eps_hit is None else eps_hit) * self.scale
        self.ds_min = settings.DS_MIN
        self.ds_max = settings.DS_MAX * self.scale
        self.r_inf = 8 * self.scale
        self.max_steps = settings.MAX_TRACE_STEPS if max_steps is None else max_steps
        self.simple = tuple(curve.simple_roots)
        self.double = tuple(curve.double_roots)
        self.multiplicity: Dict[complex, int] = {r: 1 for r in self.simple}
        self.multiplicity.update({r: 2 for r in self.double})

    def _y(self, z: complex, y_ref: complex) -> complex:
        v = complex(np.sqrt(complex(self.y2(z))))
        return v if abs(v - y_ref) <= abs(v + y_ref) else -v

    @staticmethod
    def _tangent(y: complex, previous: complex) -> complex:
        T = 1j * np.conj(y) / abs(y)
        if (T * np.conj(previous)).real < 0:
            T = -T
        return complex(T)

    def _step_size(self, z: complex) -> float:
        p = abs(self.y2(z))
        dp = abs(self.dy2(z))
        local = 0.2 * p / dp if dp > 0 else self.ds_max
        return float(min(max(local, self.ds_min), self.ds_max))

    def _hit(self, z_old: complex, z_new: complex, origin: complex) -> Optional[complex]:
        for root in self.simple + self.double:
            if root == origin:
                continue
            if _segment_distance(z_old, z_new, root) < self.eps_hit:
                return root
        return None

    def trace(self, origin: complex, direction: float, direction_index: int = 0) -> StokesLine:
        """
        Trace one Stokes line

        Raises:
            StepCollapse: If the adaptive step falls below DS_COLLAPSE or the step budget runs out
        """
        m = self.multiplicity.get(origin) or root_multiplicity(self.y2, origin)
        c = _local_coefficient(self.y2, origin, m)
        r0 = 10 * self.eps_hit
        zeta = r0 * np.exp(1j * direction)
        y_model = np.sqrt(c) * r0 ** (m / 2) * np.exp(1j * direction * m / 2)

        z = complex(origin + zeta)
        y = self._y(z, y_model)
        G = 2 * y * zeta / (m + 2)
        dz = -G.real * np.conj(y) / abs(y) ** 2
        z, G = z + dz, G + y * dz
        y = self._y(z, y)
        T = complex(np.exp(1j * direction))

        samples = [complex(origin), z]
        g_values = [0j, complex(G)]
        y_values = [0j, y]
        terminal = None

        for _ in range(self.max_steps):
            ds = self._step_size(z)
            while True:
                T0 = self._tangent(y, T)
                zm = z + ds / 2 * T0
                ym = self._y(zm, y)
                Tm = self._tangent(ym, T0)
                zn = z + ds * Tm
                yn = self._y(zn, ym)
                if abs(yn - y) <= 0.5 * abs(y) + 1e-12 or ds < settings.DS_COLLAPSE:
                    break
                ds /= 2
            if ds < settings.DS_COLLAPSE:
                raise StepCollapse(
                    "Stokes tracer step collapsed", {"z": [z.real, z.imag], "origin": [origin.real, origin.imag]}
                )

            hit = self._hit(z, zn, origin)
            if hit is not None:
                k = self.multiplicity.get(hit, 1)
                G_end = G + 2 * y * (hit - z) / (k + 2)
                samples.append(complex(hit))
                g_values.append(complex(G_end))
                y_values.append(0j)
                terminal = Short(root=complex(hit)) if k == 1 else Critical(root=complex(hit))
                break

            ymid = self._y((z + zn) / 2, ym)
            Gn = G + (zn - z) / 6 * (y + 4 * ymid + yn)
            dz = -Gn.real * np.conj(yn) / abs(yn) ** 2
            zn, Gn = zn + dz, Gn + yn * dz
            yn = self._y(zn, yn)

            T = Tm
            z, y, G = complex(zn), yn, complex(Gn)
            samples.append(z)
            g_values.append(G)
            y_values.append(y)

            if abs(z) > self.r_inf:
                terminal = Leg(angle=float(np.angle(z)))
                break
        else:
            raise StepCollapse("Stokes tracer exhausted its step budget", {"origin": [origin.real, origin.imag]})

        logger.debug("traced line from %s dir %d: %s in %d samples", origin, direction_index, terminal, len(samples))
        return StokesLine(
            origin=complex(origin),
            direction_index=direction_index,
            direction=float(direction),
            samples=np.array(samples, dtype=complex),
            g_values=np.array(g_values, dtype=complex),
            y_values=np.array(y_values, dtype=complex),
            terminal=terminal,
        )


def trace_line(curve: SpectralCurve, origin: complex, direction: float, direction_index: int = 0, eps_hit: Optional[float] = None) -> StokesLine:
    return StokesTracer(curve, eps_hit=eps_hit).trace(complex(origin), direction, direction_index)


def trace_stokes_graph(curve: SpectralCurve, include_double_roots: bool = False, eps_hit: Optional[float] = None) -> StokesGraph:
    """All Stokes lines leaving the simple roots (and optionally the double roots)"""
    tracer = StokesTracer(curve, eps_hit=eps_hit)
    origins = list(curve.simple_roots)
    if include_double_roots:
        origins += list(curve.double_roots)

    lines = []
    for origin in origins:
        m = tracer.multiplicity[origin]
        for index, theta in enumerate(initial_directions(curve.y2, origin, m)):
            lines.append(tracer.trace(origin, theta, index))
    return StokesGraph(curve=curve, lines=tuple(lines))


# Densities ----------------------------------------------------------------------

def _continued_on_segment(y2: ComplexPolynomial, z: np.ndarray, reference: np.ndarray) -> np.ndarray:
    v = np.sqrt(np.asarray(y2(z), dtype=complex))
    return np.where(np.abs(v - reference) <= np.abs(v + reference), v, -v)


def density_on_line(curve: SpectralCurve, line: StokesLine, nodes: int = 8) -> CutCandidate:
    """
    Density rho |dz| = y(z+) dz / (2 pi i) along a short line

    The sign of y(z+) is fixed so that the total charge is positive.
    """
    if not line.is_short:
        raise ValueError("density is defined on short lines only")

    z = line.samples
    y = line.y_values
    v, wv = gauss_legendre_unit(nodes)
    quad_nodes, quad_weights = [], []
    last = len(z) - 2

    for i in range(len(z) - 1):
        p, q = z[i], z[i + 1]
        if i == 0:
            zz = p + (q - p) * v**2
            yy = _continued_on_segment(curve.y2, zz, y[1] * v)
            ww = wv * 2 * (q - p) * v
        elif i == last:
            zz = q + (p - q) * v**2
            yy = _continued_on_segment(curve.y2, zz, y[i] * v)
            ww = -wv * 2 * (p - q) * v
        else:
            zz = p + (q - p) * v
            yy = _continued_on_segment(curve.y2, zz, (1 - v) * y[i] + v * y[i + 1])
            ww = wv * (q - p)
        quad_nodes.append(zz)
        quad_weights.append(yy * ww / (2j * np.pi))

    quad_nodes = np.concatenate(quad_nodes)
    quad_weights = np.concatenate(quad_weights)
    total = complex(quad_weights.sum())
    sign = 1.0 if total.real >= 0 else -1.0

    tangent = np.empty_like(z)
    tangent[1:-1] = z[2:] - z[:-2]
    tangent[0], tangent[-1] = z[1] - z[0], z[-1] - z[-2]
    tangent = tangent / np.abs(tangent)
    density = sign * (y * tangent / (2j * np.pi)).real
    density[0] = density[-1] = 0.0

    return CutCandidate(
        line=line,
        points=z,
        density=density,
        charge=sign * total.real,
        positive=bool(np.all(density[1:-1] > 0)),
        nodes=quad_nodes,
        weights=sign * quad_weights.real,
    )


def admissible_cuts(graph: StokesGraph, charge_tol: float = 1e-6) -> Optional[List[CutCandidate]]:
    """
    Short lines pairing the simple roots of y**2 with positive densities and unit total charge

    Returns None when no such set of cuts exists.
    """
    curve = graph.curve
    tol = 10 * settings.EPS_HIT * curve.scale
    roots = list(curve.simple_roots)

    shorts: Dict[Tuple[int, int], StokesLine] = {}
    for line in graph.shorts():
        i = int(np.argmin([abs(line.origin - r) for r in roots]))
        j = int(np.argmin([abs(line.terminal.root - r) for r in roots]))
        if i != j and abs(line.terminal.root - roots[j]) < tol:
            shorts.setdefault((min(i, j), max(i, j)), line)

    def matchings(remaining: List[int]):
        if not remaining:
            yield []
            return
        first = remaining[0]
        for other in remaining[1:]:
            key = (first, other)
            if key in shorts:
                rest = [r for r in remaining if r not in key]
                for tail in matchings(rest):
                    yield [key] + tail

    for matching in matchings(list(range(len(roots)))):
        cuts = [density_on_line(curve, shorts[key]) for key in matching]
        total = sum(c.charge for c in cuts)
        if all(c.positive for c in cuts) and abs(total - 1) < charge_tol:
            return cuts
        logger.debug("rejected cut set %s: charge %.8f, positive %s", matching, total, [c.positive for c in cuts])
    return None


# Sign maps ----------------------------------------------------------------------

def default_bbox(curve: SpectralCurve) -> Tuple[float, float, float, float]:
    L = max(4.0, 2.5 * max(abs(r) for r in curve.roots))
    return (-L, L, -L, L)


def potential_evaluator(curve: SpectralCurve, cuts: Sequence[CutCandidate], chunk: int = 4096) -> ReGEvaluator:
    """
    Re G(z) = Re W(z) - 2 * integral of rho(s) log|z - s| |ds| - l

    l is fixed so that Re G vanishes (on average) at the cut endpoints.
    """
    nodes = np.concatenate([c.nodes for c in cuts])
    weights = np.concatenate([c.weights for c in cuts])
    W = curve.W

    def total_potential(z: np.ndarray) -> np.ndarray:
        flat = np.asarray(z, dtype=complex).ravel()
        out = np.empty(flat.shape, dtype=float)
        for start in range(0, flat.size, chunk):
            block = flat[start:start + chunk]
            logs = np.log(np.abs(block[:, None] - nodes[None, :]))
            out[start:start + chunk] = W(block).real - 2 * logs @ weights
        return out.reshape(np.shape(z))

    endpoints = np.array([e for c in cuts for e in c.endpoints])
    level = float(np.mean(total_potential(endpoints)))

    def evaluate(z: np.ndarray) -> np.ndarray:
        return total_potential(z) - level

    return evaluate


def sign_map(
    evaluator: ReGEvaluator,
    bbox: Tuple[float, float, float, float],
    resolution: int | Tuple[int, int] = 128,
) -> SignMap:
    """Grid of sign(Re G) at cell centres"""
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    if min(nx, ny) < 64:
        raise ValueError("sign map resolution must be at least 64 x 64")

    grid = SignMap(bbox=tuple(float(b) for b in bbox), resolution=(nx, ny), signs=np.zeros((ny, nx), dtype=np.int8))
    values = np.asarray(evaluator(grid.centres()), dtype=float)
    cutoff = 1e-9 * (1.0 + np.max(np.abs(values)))
    signs = np.where(np.abs(values) <= cutoff, 0, np.sign(values)).astype(np.int8)
    return SignMap(bbox=grid.bbox, resolution=(nx, ny), signs=signs, values=values)


# Embedding ----------------------------------------------------------------------

def _ray_extent(bbox: Tuple[float, float, float, float], phi: float) -> float:
    re_min, re_max, im_min, im_max = bbox
    dx, dy = np.cos(phi), np.sin(phi)
    limits = []
    if dx > 1e-12:
        limits.append(re_max / dx)
    if dx < -1e-12:
        limits.append(re_min / dx)
    if dy > 1e-12:
        limits.append(im_max / dy)
    if dy < -1e-12:
        limits.append(im_min / dy)
    return max(0.0, min(limits))


def _majority_label(labels: np.ndarray, grid: SignMap, points: Sequence[complex]) -> Tuple[int, Optional[Tuple[int, int]]]:
    found = []
    for p in points:
        cell = grid.cell_of(p)
        if cell is not None and labels[cell] > 0:
            found.append((int(labels[cell]), cell))
    if not found:
        return 0, None
    label = Counter(lab for lab, _ in found).most_common(1)[0][0]
    cell = next(c for lab, c in found if lab == label)
    return label, cell


def _bfs_path(labels: np.ndarray, label: int, start: Tuple[int, int], goal: Tuple[int, int]) -> List[Tuple[int, int]]:
    ny, nx = labels.shape
    previous = {start: None}
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        if cell == goal:
            break
        iy, ix = cell
        for nxt in ((iy + 1, ix), (iy - 1, ix), (iy, ix + 1), (iy, ix - 1)):
            if 0 <= nxt[0] < ny and 0 <= nxt[1] < nx and nxt not in previous and labels[nxt] == label:
                previous[nxt] = cell
                queue.append(nxt)
    if goal not in previous:
        return [start, goal]
    path = []
    cell = goal
    while cell is not None:
        path.append(cell)
        cell = previous[cell]
    return path[::-1]


def _decide_embedding(
    cuts: Sequence[CutCandidate], grid: SignMap, sectors: Tuple[int, int], angles: Sequence[float]
) -> EmbeddingReport:
    labels, _ = ndimage.label(grid.signs > 0)
    dx, dy = grid.cell_size
    ring_radius = 2.5 * max(dx, dy)
    ring = np.exp(2j * np.pi * np.arange(24) / 24)

    sector_info = []
    for k in sectors:
        phi = angles[k]
        centre = 0.9 * _ray_extent(grid.bbox, phi) * np.exp(1j * phi)
        neighbourhood = [centre] + list(centre + 2 * max(dx, dy) * ring)
        sector_info.append(_majority_label(labels, grid, neighbourhood))

    if not cuts:
        return EmbeddingReport(False, tuple(sectors), grid.resolution, reason="no cuts")
    if not all(c.positive for c in cuts):
        return EmbeddingReport(False, tuple(sectors), grid.resolution, reason="cut density not positive")

    endpoint_info = {}
    for index, cut in enumerate(cuts):
        for e in cut.endpoints:
            endpoint_info[(index, e)] = _majority_label(labels, grid, list(e + ring_radius * ring))

    (start_label, start_cell), (end_label, end_cell) = sector_info
    if start_label == 0 or end_label == 0:
        return EmbeddingReport(False, tuple(sectors), grid.resolution, (start_label, end_label), reason="sector not in a positive region")

    for order in itertools.permutations(range(len(cuts))):
        for flips in itertools.product((False, True), repeat=len(cuts)):
            chain = []
            for index, flip in zip(order, flips):
                p, q = cuts[index].endpoints
                chain.append((index, q, p) if flip else (index, p, q))

            current_label, current_cell = start_label, start_cell
            pieces: List[np.ndarray] = []
            ok = True
            for index, entry, exit_ in chain:
                label, cell = endpoint_info[(index, entry)]
                if label != current_label:
                    ok = False
                    break
                path = _bfs_path(labels, label, current_cell, cell)
                pieces.append(np.array([grid.point_of(c) for c in path]))
                polyline = cuts[index].polyline
                pieces.append(polyline if abs(polyline[0] - entry) < abs(polyline[-1] - entry) else polyline[::-1])
                current_label, current_cell = endpoint_info[(index, exit_)]
                if current_label == 0:
                    ok = False
                    break
            if ok and current_label == end_label:
                path = _bfs_path(labels, end_label, current_cell, end_cell)
                pieces.append(np.array([grid.point_of(c) for c in path]))
                return EmbeddingReport(
                    True,
                    tuple(sectors),
                    grid.resolution,
                    (start_label, end_label),
                    cut_order=tuple(order),
                    polyline=np.concatenate(pieces),
                )

    return EmbeddingReport(False, tuple(sectors), grid.resolution, (start_label, end_label), reason="no chain through positive regions")


def embed_s_curve(
    cuts: Sequence[CutCandidate],
    grid: SignMap,
    sectors: Tuple[int, int],
    W: Optional[ComplexPolynomial] = None,
    evaluator: Optional[ReGEvaluator] = None,
) -> EmbeddingReport:
    """
    Decide whether the cuts prolong through {Re G > 0} into both target sectors

    Args:
        cuts: Positive cut candidates
        grid: Sign map of Re G
        sectors: Pair of sector indices (i, j)
        W: Potential fixing the sector bisectors (cubic z**3/3 by default)
        evaluator: When given, the decision is repeated at doubled resolution

    Raises:
        InconclusiveResolution: If the decision changes under refinement
    """
    angles = algebra_service.sector_bisectors(W) if W is not None else [2 * np.pi * k / 3 for k in range(3)]
    report = _decide_embedding(cuts, grid, sectors, angles)

    if evaluator is not None:
        nx, ny = grid.resolution
        fine = sign_map(evaluator, grid.bbox, (2 * nx, 2 * ny))
        refined = _decide_embedding(cuts, fine, sectors, angles)
        if refined.embeddable != report.embeddable:
            raise InconclusiveResolution(
                "embedding decision changes under grid refinement",
                {"coarse": report.embeddable, "fine": refined.embeddable, "resolution": list(grid.resolution)},
            )
    return report


def analyse_configuration(
    curve: SpectralCurve,
    sectors: Tuple[int, int],
    resolution: Optional[int] = None,
    refine: bool = False,
) -> Tuple[StokesGraph, Optional[List[CutCandidate]], Optional[SignMap], EmbeddingReport]:
    """Trace, select admissible cuts, build the sign map and decide embeddability"""
    resolution = resolution or settings.SIGN_MAP_RESOLUTION
    graph = trace_stokes_graph(curve)
    cuts = admissible_cuts(graph)
    if cuts is None:
        report = EmbeddingReport(False, tuple(sectors), (resolution, resolution), reason="no admissible cuts")
        return graph, None, None, report

    evaluator = potential_evaluator(curve, cuts)
    grid = sign_map(evaluator, default_bbox(curve), resolution)
    report = embed_s_curve(cuts, grid, sectors, W=curve.W, evaluator=evaluator if refine else None)
    return graph, cuts, grid, report
