import numpy as np
import pytest

from core.exceptions import EvaluationAtBranchPoint
from services import onecut_service


def test_cubic_t0_branch0_endpoints(cubic_t0) -> None:
    assert cubic_t0.beta == pytest.approx(-1.0, abs=1e-14)
    assert cubic_t0.delta2 == pytest.approx(-2.0, abs=1e-14)
    assert {complex(np.round(e, 12)) for e in cubic_t0.endpoints} == {
        complex(np.round(-1 - 1j * np.sqrt(2), 12)),
        complex(np.round(-1 + 1j * np.sqrt(2), 12)),
    }


@pytest.mark.parametrize("t", [0.0, -1.1, 0.5 + 0.7j, -2.0 - 1.5j, 4.0j])
def test_betas_solve_the_cubic(t: complex) -> None:
    for k, beta in enumerate(onecut_service.cubic_betas(t)):
        assert abs(beta**3 - t * beta + 1) < 1e-12 * (1 + abs(beta) ** 3), k
        sol = onecut_service.solve_cubic_branch(t, k)
        assert sol.delta2 == pytest.approx(2 / beta)
        assert (sol.a + sol.b) / 2 == pytest.approx(beta)


def test_betas_are_distinct_away_from_branch_points() -> None:
    betas = onecut_service.cubic_betas(-1.0 + 0.4j)
    assert min(abs(betas[i] - betas[j]) for i in range(3) for j in range(i)) > 0.1


def test_branch_points_modulus() -> None:
    points = onecut_service.cubic_branch_points()
    assert [p.index for p in points] == [0, 1, 2]
    for p in points:
        assert abs(p.t_k) == pytest.approx(3 * 2 ** (-2 / 3))
        assert (p.t_k / 3) ** 3 == pytest.approx(0.25)


def test_invalid_branch_index() -> None:
    with pytest.raises(ValueError):
        onecut_service.solve_cubic_branch(0.0, 3)


def test_gaussian_newton_solution() -> None:
    W = onecut_service.gaussian_potential()
    sol = onecut_service.solve_onecut_general(W, onecut_service.make_solution(0.1, 3.5))
    assert sol.beta == pytest.approx(0.0, abs=1e-9)
    assert sol.delta2 == pytest.approx(4.0, abs=1e-9)
    assert sorted([sol.a.real, sol.b.real]) == pytest.approx([-2.0, 2.0], abs=1e-9)


def test_general_newton_matches_cubic_closed_form() -> None:
    t = 0.5 + 0.3j
    exact = onecut_service.solve_cubic_branch(t, 0)
    guess = onecut_service.make_solution(exact.beta + 0.05, exact.delta2 - 0.05j, branch_k=0)
    sol = onecut_service.solve_onecut_general(onecut_service.cubic_potential(t), guess)
    assert sol.beta == pytest.approx(exact.beta, abs=1e-9)
    assert sol.delta2 == pytest.approx(exact.delta2, abs=1e-9)
    assert sol.branch_k == 0


def test_endpoint_equations_vanish_at_solution() -> None:
    t = -0.7 + 1.2j
    sol = onecut_service.solve_cubic_branch(t, 1)
    residual = onecut_service.endpoint_equations(onecut_service.cubic_potential(t), sol.beta, sol.delta2)
    np.testing.assert_allclose(residual, 0, atol=1e-12)


def test_gaussian_g_function_values() -> None:
    W = onecut_service.gaussian_potential()
    sol = onecut_service.make_solution(0.0, 4.0)
    assert onecut_service.g_onecut(sol.a, W, sol) == pytest.approx(0, abs=1e-12)
    g_b = onecut_service.g_onecut(sol.b, W, sol)
    assert g_b.real == pytest.approx(0, abs=1e-12)
    assert g_b.imag == pytest.approx(2 * np.pi)

    x = 3.0
    expected = x * np.sqrt(x**2 - 4) / 2 - 2 * np.log((x + np.sqrt(x**2 - 4)) / 4) - np.log(4)
    assert onecut_service.g_onecut(x, W, sol).real == pytest.approx(expected, abs=1e-12)
    assert expected > 0


def test_g_imaginary_part_grows_along_the_cut() -> None:
    W = onecut_service.gaussian_potential()
    sol = onecut_service.make_solution(0.0, 4.0)
    xs = np.linspace(-1.9, 1.9, 20)
    im = np.array([onecut_service.g_onecut(x + 1e-7j, W, sol).imag for x in xs])
    expected = 2 * np.pi - 2 * np.arccos(xs / 2) + xs * np.sqrt(4 - xs**2) / 2
    np.testing.assert_allclose(im, expected, atol=1e-5)
    assert np.all(np.diff(im) > 0)
    near_b = onecut_service.g_onecut(2 - 1e-8 + 1e-8j, W, sol)
    assert near_b.imag == pytest.approx(2 * np.pi, abs=1e-3)


def test_g_rejects_points_on_the_cut() -> None:
    W = onecut_service.gaussian_potential()
    sol = onecut_service.make_solution(0.0, 4.0)
    with pytest.raises(EvaluationAtBranchPoint):
        onecut_service.g_onecut(0.5, W, sol)


def test_closed_form_matches_general_g() -> None:
    t, k = 0.3 + 0.2j, 0
    sol = onecut_service.solve_cubic_branch(t, k)
    general = onecut_service.g_onecut(-sol.beta, onecut_service.cubic_potential(t), sol)
    assert onecut_service.g_cubic_at_minus_beta(t, k) == pytest.approx(general, abs=1e-10)


def test_phase_indicator_reference_values() -> None:
    assert onecut_service.phase_indicator(0.0, 0) == pytest.approx(-2.2925, abs=1e-3)
    assert abs(onecut_service.phase_indicator(-1.0, 0)) < 5e-3


def test_phase_indicator_symmetry_under_rotation() -> None:
    # t -> omega t carries beta_0 to beta_2 (scaled by conj(omega)) and leaves G(-beta) unchanged
    t = -1.3 + 0.2j
    rotated = t * onecut_service.OMEGA
    assert onecut_service.cubic_betas(rotated)[2] == pytest.approx(onecut_service.cubic_betas(t)[0] / onecut_service.OMEGA)
    values = [onecut_service.phase_indicator(t, 0), onecut_service.phase_indicator(rotated, 2)]
    assert values[0] == pytest.approx(values[1], abs=1e-9)


def test_branch_labels_permute_around_large_circle() -> None:
    labels = onecut_service.follow_branch_on_circle(3.0, 0)
    assert labels[0][1] == 0
    by_angle = dict(labels)
    middle = min(by_angle, key=lambda a: abs(a - np.pi))
    assert by_angle[middle] == 1
    assert labels[-1][1] == 2
    first_change = next(angle for angle, label in labels if label != 0)
    assert first_change == pytest.approx(2 * np.pi / 3, abs=0.02)
