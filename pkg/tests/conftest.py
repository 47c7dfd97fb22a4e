import numpy as np
import pytest
from typer.testing import CliRunner

from core.config import settings
from models.polynomial import BranchedRadical, ComplexPolynomial
from services import onecut_service


@pytest.fixture(autouse=True)
def restore_settings():
    """Commands push their tolerances into the shared settings; undo that after each test"""
    saved = settings.model_dump()
    yield
    for key, value in saved.items():
        setattr(settings, key, value)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def gaussian_radical() -> BranchedRadical:
    return BranchedRadical((-2.0, 2.0))


@pytest.fixture
def quartic_potential() -> ComplexPolynomial:
    """W = z**4/4 - (3/2) z**2, hermitian two-cut with endpoints -sqrt5, -1, 1, sqrt5"""
    return ComplexPolynomial((0, 0, -1.5, 0, 0.25))


@pytest.fixture
def quartic_endpoints() -> tuple:
    return (-np.sqrt(5.0), -1.0, 1.0, np.sqrt(5.0))


@pytest.fixture
def cubic_t0():
    return onecut_service.solve_cubic_branch(0.0, 0)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()
