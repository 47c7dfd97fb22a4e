from services import (
    algebra_service,
    onecut_service,
    abelian_service,
    stokes_service,
    twocut_service,
    phase_service,
    orthopoly_service
)

__all__ = [
    "algebra_service",
    "onecut_service",
    "abelian_service",
    "twocut_service",
    "stokes_service",
    "phase_service",
    "orthopoly_service"
]
