import numpy as np
import pytest

from core.exceptions import EvaluationAtBranchPoint
from models.polynomial import BranchedRadical, ComplexPolynomial
from services import algebra_service


def _one_cut(beta: complex, delta2: complex) -> BranchedRadical:
    delta = np.sqrt(complex(delta2))
    return BranchedRadical((beta - delta, beta + delta))


def test_eval_w_real_axis_beyond_cut(gaussian_radical: BranchedRadical) -> None:
    assert algebra_service.eval_w(gaussian_radical, 3.0) == pytest.approx(np.sqrt(5.0), abs=1e-14)


def test_eval_w_upper_side_of_cut(gaussian_radical: BranchedRadical) -> None:
    w = algebra_service.eval_w(gaussian_radical, 0.5 + 1e-12j)
    assert w == pytest.approx(1j * np.sqrt(3.75), abs=1e-9)
    assert algebra_service.eval_w(gaussian_radical, 1e-9j) == pytest.approx(2j, abs=1e-8)


def test_boundary_value_matches_upper_side(gaussian_radical: BranchedRadical) -> None:
    z = np.array([-1.5, -0.5, 0.5, 1.5])
    expected = 1j * np.sqrt(4 - z**2)
    np.testing.assert_allclose(algebra_service.boundary_value(gaussian_radical, z, 0), expected, atol=1e-14)


def test_eval_w_against_binomial_series() -> None:
    rad = BranchedRadical((-1 - 1j * np.sqrt(2), -1 + 1j * np.sqrt(2)))
    z = 10.0
    # sqrt((z - beta)**2 - delta**2) with beta = -1, delta**2 = -2
    u = z + 1
    series = u * sum(
        c * (-2.0 / u**2) ** k
        for k, c in enumerate([1, -1 / 2, -1 / 8, -1 / 16, -5 / 128, -7 / 256, -21 / 1024, -33 / 2048])
    )
    assert algebra_service.eval_w(rad, z) == pytest.approx(series, abs=1e-10)


def test_eval_w_squares_back(rng: np.random.Generator) -> None:
    endpoints = (-1.3 - 0.4j, -0.2 + 0.9j, 0.7 - 1.1j, 1.6 + 0.3j)
    rad = BranchedRadical(endpoints)
    z = rng.uniform(-3, 3, 100) + 1j * rng.uniform(-3, 3, 100)
    w = np.array([algebra_service.eval_w(rad, p) for p in z])
    square = rad.square()(z)
    np.testing.assert_array_less(np.abs(w**2 - square) / np.abs(square), 1e-12)


def test_eval_w_rejects_branch_points(gaussian_radical: BranchedRadical) -> None:
    with pytest.raises(EvaluationAtBranchPoint):
        algebra_service.eval_w(gaussian_radical, 2.0)
    with pytest.raises(EvaluationAtBranchPoint):
        algebra_service.eval_w(gaussian_radical, -2.0 + 1e-11)


def test_eval_w_loop_around_both_endpoints_returns(gaussian_radical: BranchedRadical) -> None:
    loop = [5 * np.exp(1j * theta) for theta in np.linspace(0, 2 * np.pi, 200)]
    w = algebra_service.eval_w(gaussian_radical, 5.0, path_hint=loop)
    assert w == pytest.approx(np.sqrt(21.0), abs=1e-10)


def test_eval_w_loop_around_one_endpoint_flips_sign(gaussian_radical: BranchedRadical) -> None:
    loop = [2 + 1.0 * np.exp(1j * theta) for theta in np.linspace(0, 2 * np.pi, 400)]
    w = algebra_service.eval_w(gaussian_radical, 3.0, path_hint=loop)
    assert w == pytest.approx(-np.sqrt(5.0), abs=1e-10)


def test_laurent_of_z_over_w(gaussian_radical: BranchedRadical) -> None:
    series = algebra_service.laurent_at_infinity(ComplexPolynomial((0, 1)), gaussian_radical, depth=5)
    assert series.top_degree == 0
    assert series.coefficient(0) == pytest.approx(1)
    assert series.coefficient(-1) == pytest.approx(0)
    assert series.coefficient(-2) == pytest.approx(2)
    assert series.coefficient(-4) == pytest.approx(6)


def test_laurent_of_cubic_derivative_on_one_cut() -> None:
    beta, delta2, t = 0.3 + 0.2j, 1.1 - 0.4j, 0.7
    rad = _one_cut(beta, delta2)
    series = algebra_service.laurent_at_infinity(ComplexPolynomial((-t, 0, 1)), rad, depth=3)
    assert series.coefficient(1) == pytest.approx(1)
    assert series.coefficient(0) == pytest.approx(beta)
    assert series.coefficient(-1) == pytest.approx(beta**2 + delta2 / 2 - t)


def test_laurent_of_zero_is_zero(gaussian_radical: BranchedRadical) -> None:
    series = algebra_service.laurent_at_infinity(ComplexPolynomial.zero(), gaussian_radical, depth=4)
    assert all(c == 0 for c in series.coeffs)
    assert algebra_service.oplus_part(ComplexPolynomial.zero(), gaussian_radical).is_zero


def test_oplus_part_gaussian(gaussian_radical: BranchedRadical) -> None:
    h = algebra_service.oplus_part(ComplexPolynomial((0, 1)), gaussian_radical)
    assert h.degree == 0
    assert h.coefficient(0) == pytest.approx(1)


def test_oplus_part_one_cut_cubic() -> None:
    beta, delta2, t = -0.8 + 0.5j, 2.0 / (-0.8 + 0.5j), 0.4 - 0.1j
    h = algebra_service.oplus_part(ComplexPolynomial((-t, 0, 1)), _one_cut(beta, delta2))
    assert h.degree == 1
    assert h.coefficient(1) == pytest.approx(1)
    assert h.coefficient(0) == pytest.approx(beta)


def test_oplus_part_two_cut_is_constant() -> None:
    rad = BranchedRadical((-1.2 - 0.9j, -0.6 - 0.2j, -0.6 + 0.2j, -1.2 + 0.9j))
    h = algebra_service.oplus_part(ComplexPolynomial((1.1, 0, 1)), rad)
    assert h.degree == 0
    assert h.coefficient(0) == pytest.approx(1)


def test_remainder_after_projection_decays() -> None:
    rad = BranchedRadical((-1.0 - 0.5j, 0.3 + 1.2j))
    num = ComplexPolynomial((0.2, -1.0, 0.5, 1.0))
    h = algebra_service.oplus_part(num, rad)
    remainders = []
    for R in (1e3, 1e4):
        z = R * np.exp(0.3j)
        remainders.append(abs(num(z) / algebra_service.eval_w(rad, z) - h(z)))
    assert remainders[0] / remainders[1] == pytest.approx(10, rel=0.05)


def test_continue_sqrt_changes_sheet_around_the_origin() -> None:
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 400))
    roots = algebra_service.continue_sqrt(z, 1.0)
    np.testing.assert_allclose(roots**2, z, atol=1e-12)
    assert np.max(np.abs(np.diff(roots))) < 0.05
    assert roots[-1] == pytest.approx(-1.0)


def test_sector_bisectors() -> None:
    cubic = ComplexPolynomial((0, -0.7, 0, 1 / 3))
    np.testing.assert_allclose(algebra_service.sector_bisectors(cubic), [0, 2 * np.pi / 3, 4 * np.pi / 3])
    np.testing.assert_allclose(algebra_service.sector_bisectors(ComplexPolynomial((0, 0, 0.5))), [0, np.pi])
    rotated = ComplexPolynomial((0, 0, 0, 1j / 3))
    np.testing.assert_allclose(algebra_service.sector_bisectors(rotated), [11 * np.pi / 6, np.pi / 2, 7 * np.pi / 6])
