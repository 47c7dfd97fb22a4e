import numpy as np
import pytest

from models.polynomial import ComplexPolynomial
from services import abelian_service, onecut_service
from utils.newton import newton_solve


def test_one_cut_basis_for_gaussian() -> None:
    basis = abelian_service.build_basis((-2.0, 2.0), max_order=2)
    assert basis.first_kind == ()
    P1, P2 = basis.second_kind
    np.testing.assert_allclose(P1.coeffs, [0, 0.5], atol=1e-14)
    np.testing.assert_allclose(P2.coeffs, [-2, 0, 1], atol=1e-14)
    np.testing.assert_allclose(basis.third_kind.coeffs, [1], atol=1e-14)


def test_gaussian_endpoint_conditions_hold_only_at_the_solution() -> None:
    W = onecut_service.gaussian_potential()
    residual = abelian_service.ce_residual((-2.0, 2.0), W, [])
    np.testing.assert_allclose(residual, 0, atol=1e-12)

    wrong = abelian_service.ce_residual((-1.5, 1.5), W, [])
    assert max(abs(v) for v in wrong) > 0.1


def test_cubic_one_cut_endpoint_conditions(cubic_t0) -> None:
    W = onecut_service.cubic_potential(0.0)
    residual = abelian_service.ce_residual(cubic_t0.endpoints, W, [])
    np.testing.assert_allclose(residual, 0, atol=1e-10)


def test_first_kind_normalization(quartic_endpoints) -> None:
    basis = abelian_service.build_basis(quartic_endpoints, max_order=4)
    assert len(basis.first_kind) == 1
    assert abelian_service.a_period(quartic_endpoints, basis.first_kind[0], 1) == pytest.approx(1, abs=1e-9)
    for P in basis.second_kind:
        assert abs(abelian_service.a_period(quartic_endpoints, P, 1)) < 1e-9
    assert abs(abelian_service.a_period(quartic_endpoints, basis.third_kind, 1)) < 1e-9


def test_cycle_index_bounds(quartic_endpoints) -> None:
    p = ComplexPolynomial((1,))
    with pytest.raises(ValueError):
        abelian_service.a_period(quartic_endpoints, p, 2)
    with pytest.raises(ValueError):
        abelian_service.b_period(quartic_endpoints, p, 3)


def test_symmetric_quartic_has_vanishing_period_constant(quartic_endpoints, quartic_potential) -> None:
    r = abelian_service.solve_r(quartic_endpoints, quartic_potential)
    assert len(r) == 1
    assert r[0] == pytest.approx(0, abs=1e-8)


def test_symmetric_quartic_satisfies_endpoint_conditions(quartic_endpoints, quartic_potential) -> None:
    residual = abelian_service.ce_residual(quartic_endpoints, quartic_potential, [0.0])
    np.testing.assert_allclose(residual, 0, atol=1e-8)


def test_spectral_curve_identity(quartic_endpoints, quartic_potential, rng: np.random.Generator) -> None:
    z = rng.uniform(-3, 3, 20) + 1j * rng.uniform(-3, 3, 20)
    residual = abelian_service.eep_residual(quartic_endpoints, quartic_potential, [0.0], z)
    assert residual.max() < 1e-8


def test_period_matrix_shapes(quartic_endpoints, quartic_potential) -> None:
    periods = abelian_service.period_matrix(quartic_endpoints, quartic_potential)
    assert periods.B_first_kind.shape == (1, 1)
    assert len(periods.B_second_third) == quartic_potential.degree + 1
    assert abs(periods.B_first_kind.imag[0, 0]) > 1e-3



def test_hermitian_endpoints_recovered_on_the_zero_period_branch(quartic_endpoints, quartic_potential) -> None:
    def F(x: np.ndarray) -> np.ndarray:
        return np.real(abelian_service.ce_residual(tuple(x), quartic_potential, [0.0]))

    x, norm, _ = newton_solve(F, np.array([-2.3, -1.05, 0.95, 2.2]), tol=1e-10, epsilon=1e-7)
    assert norm < 1e-10
    np.testing.assert_allclose(x, quartic_endpoints, atol=1e-6)
    r = abelian_service.solve_r(tuple(x), quartic_potential)
    assert r[0] == pytest.approx(0, abs=1e-8)
