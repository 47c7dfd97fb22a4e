import numpy as np
import pytest

from core.config import settings
from models.stokes import Leg, Short
from services import onecut_service, stokes_service, twocut_service


@pytest.fixture(scope="module")
def gaussian_curve():
    return stokes_service.spectral_curve(onecut_service.gaussian_potential(), (-2.0, 2.0))


@pytest.fixture(scope="module")
def gaussian_graph(gaussian_curve):
    return stokes_service.trace_stokes_graph(gaussian_curve)


def test_gaussian_curve_has_no_double_roots(gaussian_curve) -> None:
    assert gaussian_curve.double_roots == ()
    z = np.array([0.5, 3.0, 1j])
    np.testing.assert_allclose(gaussian_curve.y2(z), z**2 - 4, atol=1e-12)


def test_initial_directions_at_simple_root(gaussian_curve) -> None:
    directions = stokes_service.initial_directions(gaussian_curve.y2, -2.0)
    np.testing.assert_allclose(directions, [0, 2 * np.pi / 3, 4 * np.pi / 3], atol=1e-12)
    assert stokes_service.root_multiplicity(gaussian_curve.y2, 2.0) == 1


def test_double_root_has_four_directions(cubic_t0) -> None:
    curve = stokes_service.curve_from_onecut(onecut_service.cubic_potential(0.0), cubic_t0)
    (alpha,) = curve.double_roots
    assert alpha == pytest.approx(-cubic_t0.beta)
    assert stokes_service.root_multiplicity(curve.y2, alpha) == 2
    assert len(stokes_service.initial_directions(curve.y2, alpha)) == 4


def test_gaussian_graph_has_one_short(gaussian_graph) -> None:
    assert len(gaussian_graph.lines) == 6
    shorts = gaussian_graph.shorts()
    assert len(shorts) == 2
    assert {complex(line.terminal.root) for line in shorts} == {-2, 2}
    assert len(gaussian_graph.legs()) == 4
    assert all(isinstance(line.terminal, Leg) for line in gaussian_graph.legs())
    short = gaussian_graph.short_between(-2.0, 2.0, 1e-3)
    assert short is not None
    assert np.max(np.abs(short.samples.imag)) < 1e-5


def test_gaussian_semicircle_density(gaussian_graph) -> None:
    cuts = stokes_service.admissible_cuts(gaussian_graph)
    assert cuts is not None and len(cuts) == 1
    (cut,) = cuts
    assert cut.positive
    assert cut.charge == pytest.approx(1, abs=1e-6)
    x = cut.points.real
    np.testing.assert_allclose(cut.density, np.sqrt(np.clip(4 - x**2, 0, None)) / (2 * np.pi), atol=1e-4)


def test_density_requires_a_short(gaussian_curve, gaussian_graph) -> None:
    with pytest.raises(ValueError):
        stokes_service.density_on_line(gaussian_curve, gaussian_graph.legs()[0])


def test_gaussian_sign_map(gaussian_curve, gaussian_graph) -> None:
    cuts = stokes_service.admissible_cuts(gaussian_graph)
    evaluator = stokes_service.potential_evaluator(gaussian_curve, cuts)
    assert evaluator(np.array([3.0]))[0] > 0
    assert evaluator(np.array([3j]))[0] < 0
    grid = stokes_service.sign_map(evaluator, (-5, 5, -5, 5), 64)
    assert grid.signs.shape == (64, 64)
    assert grid.signs[grid.cell_of(4.5)] == 1
    assert grid.signs[grid.cell_of(-4.5)] == 1
    assert grid.signs[grid.cell_of(4.5j)] == -1


def test_sign_map_rejects_coarse_grids(gaussian_curve, gaussian_graph) -> None:
    cuts = stokes_service.admissible_cuts(gaussian_graph)
    evaluator = stokes_service.potential_evaluator(gaussian_curve, cuts)
    with pytest.raises(ValueError):
        stokes_service.sign_map(evaluator, (-5, 5, -5, 5), 32)


def test_gaussian_real_line_is_an_s_curve(gaussian_curve, gaussian_graph) -> None:
    W = onecut_service.gaussian_potential()
    cuts = stokes_service.admissible_cuts(gaussian_graph)
    evaluator = stokes_service.potential_evaluator(gaussian_curve, cuts)
    grid = stokes_service.sign_map(evaluator, (-5, 5, -5, 5), 96)
    report = stokes_service.embed_s_curve(cuts, grid, (1, 0), W=W, evaluator=evaluator)
    assert report.embeddable
    assert report.polyline.size > 0
    assert report.sector_components[0] != report.sector_components[1]


def test_cubic_t0_branch0_is_embeddable(cubic_t0) -> None:
    curve = stokes_service.curve_from_onecut(onecut_service.cubic_potential(0.0), cubic_t0)
    graph, cuts, grid, report = stokes_service.analyse_configuration(curve, (1, 2), resolution=128)
    assert graph.short_between(cubic_t0.a, cubic_t0.b, 1e-3 * curve.scale) is not None
    assert isinstance(graph.short_between(cubic_t0.a, cubic_t0.b, 1e-3 * curve.scale).terminal, Short)
    assert cuts is not None and len(cuts) == 1
    assert cuts[0].charge == pytest.approx(1, abs=1e-6)
    assert grid is not None
    assert report.embeddable


def test_cubic_branch0_fails_past_the_boundary() -> None:
    t = -1.1
    sol = onecut_service.solve_cubic_branch(t, 0)
    curve = stokes_service.curve_from_onecut(onecut_service.cubic_potential(t), sol)
    _, _, _, report = stokes_service.analyse_configuration(curve, (1, 2), resolution=128)
    assert not report.embeddable
    assert report.reason


@pytest.mark.slow
def test_two_cut_configuration_is_embeddable() -> None:
    t = -1.1
    catalogue = twocut_service.TwoCutCatalogue.seeded(targets=(t,))
    sol = catalogue.solve_at(t)
    curve = stokes_service.curve_from_twocut(t, sol)
    assert curve.double_roots == ()
    graph, cuts, grid, report = stokes_service.analyse_configuration(curve, (1, 2), resolution=128)
    assert cuts is not None and len(cuts) == 2
    assert sum(c.charge for c in cuts) == pytest.approx(1, abs=1e-6)
    assert report.embeddable


def _segments_cross(samples: np.ndarray) -> bool:
    """Whether two non-adjacent segments of the polyline intersect"""
    p, q = samples[:-1], samples[1:]

    def orient(a, b, c):
        return np.sign(((b - a) * np.conj(c - a)).imag)

    for i in range(len(p) - 2):
        a, b = p[i], q[i]
        c, d = p[i + 2 :], q[i + 2 :]
        hits = (orient(a, b, c) * orient(a, b, d) < 0) & (orient(c, d, a) * orient(c, d, b) < 0)
        if np.any(hits):
            return True
    return False


@pytest.fixture
def cubic_graph(cubic_t0):
    curve = stokes_service.curve_from_onecut(onecut_service.cubic_potential(0.0), cubic_t0)
    return stokes_service.trace_stokes_graph(curve)


def test_stokes_lines_stay_on_the_level_set(cubic_graph) -> None:
    for line in cubic_graph.lines:
        values = line.g_values[:-1] if line.is_short else line.g_values
        assert np.all(np.abs(values.real) < 1e-6 * (1 + np.abs(values)))


def test_imaginary_part_is_monotone_along_shorts(cubic_graph, gaussian_graph) -> None:
    for graph in (cubic_graph, gaussian_graph):
        assert graph.shorts()
        for line in graph.shorts():
            steps = np.diff(line.g_values.imag)
            assert np.all(steps > 0) or np.all(steps < 0)


def test_stokes_lines_do_not_self_intersect(cubic_graph) -> None:
    for line in cubic_graph.lines:
        assert not _segments_cross(line.samples)


def test_short_joins_the_endpoints_before_the_split() -> None:
    t = -0.9
    sol = onecut_service.solve_cubic_branch(t, 0)
    curve = stokes_service.curve_from_onecut(onecut_service.cubic_potential(t), sol)
    graph = stokes_service.trace_stokes_graph(curve)
    short = graph.short_between(sol.a, sol.b, 10 * settings.EPS_HIT * curve.scale)
    assert short is not None
    assert np.max(np.abs(short.g_values[:-1].real)) < 1e-6
