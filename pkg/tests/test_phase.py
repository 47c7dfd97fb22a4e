import numpy as np
import pytest

from core.config import settings
from core.exceptions import NoSignChange
from models.phase import PhaseBoundary, PhaseKind, PhaseLabel, TransitionKind
from services import phase_service
from utils.geometry import polyline_distance

T_CRITICAL = -1.00054


def test_critical_point_on_negative_axis() -> None:
    t_c = phase_service.critical_t_on_ray(0, np.pi)
    assert t_c.real == pytest.approx(T_CRITICAL, abs=1e-4)
    assert abs(t_c.imag) < 1e-9
    assert abs(phase_service.boundary_function(t_c, 0)) < 1e-8


@pytest.mark.parametrize("k", [1, 2])
def test_critical_points_are_rotated_images(k: int) -> None:
    t_k = phase_service.critical_t_on_ray(k, phase_service.RAY_FOR_BRANCH[k])
    assert abs(t_k) == pytest.approx(abs(T_CRITICAL), abs=1e-4)
    assert np.angle(t_k) % (2 * np.pi) == pytest.approx(phase_service.RAY_FOR_BRANCH[k])


def test_critical_point_needs_a_sign_change() -> None:
    with pytest.raises(NoSignChange):
        phase_service.critical_t_on_ray(0, np.pi, bracket=(0.1, 0.5))


def test_boundary_gradient_is_transverse() -> None:
    t_c = phase_service.critical_t_on_ray(0, np.pi)
    gradient = phase_service.boundary_gradient(t_c, 0)
    assert abs(gradient) > 1e-3
    assert phase_service.near_boundary(t_c) == 0
    assert phase_service.near_boundary(0.0) is None


def test_origin_is_one_cut_on_branch_zero() -> None:
    label = phase_service.classify_t(0.0, (1, 2))
    assert label.kind == PhaseKind.ONE_CUT
    assert label.branch_k == 0
    assert label.label == "OneCut(0)"


def test_point_on_boundary_is_labelled_boundary() -> None:
    t_c = phase_service.critical_t_on_ray(0, np.pi)
    label = phase_service.classify_t(t_c, (1, 2))
    assert label.kind == PhaseKind.BOUNDARY
    assert label.label == "Boundary(0)"


def test_labels_compare_by_phase() -> None:
    a = PhaseLabel(t=0j, contour_pair=(1, 2), kind=PhaseKind.ONE_CUT, branch_k=0)
    b = PhaseLabel(t=0.5j, contour_pair=(1, 2), kind=PhaseKind.ONE_CUT, branch_k=0)
    c = PhaseLabel(t=-1.5 + 0j, contour_pair=(1, 2), kind=PhaseKind.TWO_CUT)
    assert a.same_phase(b)
    assert not a.same_phase(c)
    assert c.label == "TwoCut"


def test_transitions_skip_boundary_points() -> None:
    labels = [
        PhaseLabel(t=0j, contour_pair=(1, 2), kind=PhaseKind.ONE_CUT, branch_k=0),
        PhaseLabel(t=0.1 + 0j, contour_pair=(1, 2), kind=PhaseKind.BOUNDARY, branch_k=1),
        PhaseLabel(t=0.2 + 0j, contour_pair=(1, 2), kind=PhaseKind.ONE_CUT, branch_k=0),
    ]
    events = phase_service.transition_report([0, 0.1, 0.2], labels=labels)
    assert events == []


def test_one_cut_branch_change_is_reported() -> None:
    labels = [
        PhaseLabel(t=2 + 0j, contour_pair=(1, 2), kind=PhaseKind.ONE_CUT, branch_k=0),
        PhaseLabel(t=2 + 0.5j, contour_pair=(1, 2), kind=PhaseKind.ONE_CUT, branch_k=1),
    ]
    (event,) = phase_service.transition_report([2, 2 + 0.5j], labels=labels)
    assert event.kind == TransitionKind.BRANCH_CHANGE
    assert (event.before, event.after) == ("OneCut(0)", "OneCut(1)")


@pytest.mark.slow
def test_trace_boundary_stays_on_the_level_set() -> None:
    t_c = phase_service.critical_t_on_ray(0, np.pi)
    boundary = phase_service.trace_boundary(0, t_c, step=0.05, max_points=200)
    assert boundary.branch_k == 0
    assert len(boundary.polyline) > 10
    assert boundary.stop_reason
    for t in boundary.polyline[:: max(1, len(boundary.polyline) // 10)]:
        assert abs(phase_service.boundary_function(complex(t), 0)) < 1e-6


@pytest.mark.slow
def test_split_transition_on_negative_axis() -> None:
    path = list(np.linspace(-0.95, -1.1, 4))
    events = phase_service.transition_report(path, (1, 2))
    assert len(events) == 1
    (event,) = events
    assert event.kind == TransitionKind.SPLIT
    assert event.branch_k == 0
    assert event.t.real == pytest.approx(T_CRITICAL, abs=1e-3)


@pytest.mark.slow
def test_small_grid_classification() -> None:
    rows = phase_service.classify_grid((-0.5, 0.5), (-0.5, 0.5), 2, workers=1)
    assert len(rows) == 4
    assert rows[0][0] == complex(-0.5, -0.5)
    assert rows[1][0] == complex(0.5, -0.5)
    assert all(label == "OneCut(0)" for _, label, _ in rows)


def test_branch_one_boundary_lies_between_the_sweep_ends() -> None:
    assert phase_service.boundary_function(-1.5 + 2j, 1) > 0
    assert phase_service.boundary_function(-1.5 + 1.5j, 1) < 0
    t_b = phase_service._locate(-1.5 + 2j, -1.5 + 1.5j, 1)
    assert t_b.real == pytest.approx(-1.5)
    assert 1.5 < t_b.imag < 1.6


def test_indicator_is_conjugation_symmetric() -> None:
    for t in (-1.5 + 1.5j, 0.3 + 0.8j, -0.7 + 2j):
        assert phase_service.boundary_function(t.conjugate(), 2) == pytest.approx(phase_service.boundary_function(t, 1))
        assert phase_service.boundary_function(t.conjugate(), 0) == pytest.approx(phase_service.boundary_function(t, 0))


def test_near_boundary_prefers_the_closest_branch(monkeypatch) -> None:
    values = {0: 5e-5, 1: 1e-6, 2: 3e-5}
    monkeypatch.setattr(phase_service, "boundary_function", lambda t, k: values[k])
    monkeypatch.setattr(phase_service, "boundary_gradient", lambda t, k: 1 + 0j)
    assert phase_service.near_boundary(0j) == 1
    assert phase_service.near_boundary(0j, tol=1e-7) is None


def test_grid_workers_are_capped_by_settings(monkeypatch) -> None:
    def no_pool(*args, **kwargs):
        raise AssertionError("process pool started")

    monkeypatch.setattr(settings, "SCURVE_THREADS", 1)
    monkeypatch.setattr(phase_service, "ProcessPoolExecutor", no_pool)
    monkeypatch.setattr(phase_service, "_classify_worker", lambda job: (job[0], "OneCut", "OneCut(0)", 0))
    rows = phase_service.classify_grid((-0.5, 0.5), (-0.5, 0.5), 2, workers=8)
    assert [label for _, label, _ in rows] == ["OneCut(0)"] * 4


def test_trace_all_boundaries_skips_failed_branches(monkeypatch) -> None:
    def critical(k, theta):
        if k == 2:
            raise NoSignChange("no sign change", {"k": k})
        return complex(k)

    def trace(k, seed, step, max_points):
        return PhaseBoundary(branch_k=k, polyline=np.array([seed]), closed=False, stop_reason="max points")

    monkeypatch.setattr(phase_service, "critical_t_on_ray", critical)
    monkeypatch.setattr(phase_service, "trace_boundary", trace)
    traced = phase_service.trace_all_boundaries()
    assert sorted(traced) == [0, 1]
    seed, boundary = traced[1]
    assert seed == 1
    assert boundary.branch_k == 1


@pytest.mark.slow
def test_traced_boundaries_are_conjugate_images() -> None:
    seed = phase_service.critical_t_on_ray(1, phase_service.RAY_FOR_BRANCH[1])
    upper = phase_service.trace_boundary(1, seed, step=0.05, max_points=60)
    lower = phase_service.trace_boundary(2, seed.conjugate(), step=0.05, max_points=60)
    distances = polyline_distance(np.conj(upper.polyline), lower.polyline)
    assert np.max(distances) < 1e-3


@pytest.mark.slow
def test_one_cut_above_the_birth_and_two_cut_below() -> None:
    above = phase_service.classify_t(-1.5 + 2j, (1, 2))
    assert above.kind == PhaseKind.ONE_CUT
    assert above.branch_k == 1
    assert phase_service.classify_t(-1.1, (1, 2)).kind == PhaseKind.TWO_CUT
    assert phase_service.classify_t(-1.5 + 1.5j, (1, 2)).kind == PhaseKind.TWO_CUT


@pytest.mark.slow
def test_birth_and_death_at_a_distance_on_a_vertical_sweep() -> None:
    path = [-1.5 + 2j, -1.5 + 1j, -1.5 + 0j, -1.5 - 1j, -1.5 - 2j]
    events = phase_service.transition_report(path, (1, 2))
    assert [e.kind for e in events] == [TransitionKind.BIRTH, TransitionKind.DEATH]
    birth, death = events
    assert (birth.before, birth.after) == ("OneCut(1)", "TwoCut")
    assert (death.before, death.after) == ("TwoCut", "OneCut(2)")
    assert birth.t.imag == pytest.approx(-death.t.imag, abs=1e-6)
