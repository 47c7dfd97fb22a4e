from schemas.common import ComplexPair, complex_pair, mp_pair, to_complex
from schemas.run_config import RunConfig
from schemas.results import (
    OneCutBase,
    OneCutResponse,
    TwoCutResponse,
    StokesLineRecord,
    StokesResponse,
    PhaseBoundaryRecord,
    PhaseGridResponse,
    ZerosResponse,
    TransitionRecord,
    SweepResponse
)

__all__ = [
    # Shared types
    "ComplexPair",
    "complex_pair",
    "mp_pair",
    "to_complex",
    # Run configuration
    "RunConfig",
    # Result payloads
    "OneCutBase",
    "OneCutResponse",
    "TwoCutResponse",
    "StokesLineRecord",
    "StokesResponse",
    "PhaseBoundaryRecord",
    "PhaseGridResponse",
    "ZerosResponse",
    "TransitionRecord",
    "SweepResponse"
]
