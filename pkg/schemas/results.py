from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from schemas.common import ComplexPair


class OneCutBase(BaseModel):
    """Endpoints and G-values of a one-cut solution"""
    t: ComplexPair
    branch_k: Optional[int] = Field(None, ge=0, le=2)
    beta: ComplexPair
    delta2: ComplexPair
    a: ComplexPair
    b: ComplexPair
    residual_norm: float = 0.0


class OneCutResponse(OneCutBase):
    """Schema for the onecut command result"""
    g_at_minus_beta: Optional[ComplexPair] = None
    phase_indicator: Optional[float] = None
    short_ab: bool = Field(..., description="A short Stokes line joins a and b")
    embeddable: bool
    reason: str = ""
    positive_density: bool = True

    class Config:
        from_attributes = True


class TwoCutResponse(BaseModel):
    """Schema for the twocut command result"""
    t: ComplexPair
    a: ComplexPair
    b: ComplexPair
    c: ComplexPair
    d: ComplexPair
    r: float
    residual_norm: float
    charges: Tuple[float, float]
    embeddable: Optional[bool] = None
    reason: str = ""


class StokesLineRecord(BaseModel):
    origin: ComplexPair
    direction_index: int
    direction: float
    terminal: str = Field(..., description="Short, Leg or Critical")
    end: Optional[ComplexPair] = None
    samples: int


class StokesResponse(BaseModel):
    """Schema for the stokes command result"""
    roots: List[ComplexPair]
    double_roots: List[ComplexPair]
    lines: List[StokesLineRecord]
    cuts: List[Tuple[ComplexPair, ComplexPair]]
    charges: List[float]
    embeddable: Optional[bool] = None
    reason: str = ""
    sector_components: Dict[str, int] = {}


class PhaseBoundaryRecord(BaseModel):
    branch_k: int
    closed: bool
    stop_reason: str
    points: int


class PhaseGridResponse(BaseModel):
    """Schema for the phase command result"""
    grid: str
    contour_pair: Tuple[int, int]
    counts: Dict[str, int]
    boundaries: List[PhaseBoundaryRecord] = []
    critical_points: Dict[str, ComplexPair] = {}


class ZerosResponse(BaseModel):
    """Schema for the zeros command result"""
    t: ComplexPair
    n: int
    contour_pair: Tuple[int, int]
    precision_digits: int
    phase: str
    zeros: List[List[str]]
    max_residual: float
    max_distance: float
    hausdorff: float
    counts_per_cut: List[int]
    outside_tube: int
    orthogonality: Dict[str, float]


class TransitionRecord(BaseModel):
    kind: str
    t: ComplexPair
    before: str
    after: str
    branch_k: Optional[int] = None


class SweepResponse(BaseModel):
    """Schema for the sweep command result"""
    path: str
    steps: int
    labels: List[str]
    events: List[TransitionRecord]
