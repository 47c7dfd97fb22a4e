from commands import (
    onecut,
    twocut,
    stokes,
    phase,
    zeros,
    sweep
)

__all__ = [
    "onecut",
    "twocut",
    "stokes",
    "phase",
    "zeros",
    "sweep"
]
