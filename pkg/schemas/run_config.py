import hashlib
import json
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from core.config import settings
from schemas.common import ComplexPair, SectorPair


class RunConfig(BaseModel):
    """Parameters of one command run; the canonical dump is hashed into every output file"""
    command: str = Field(..., description="Command name")
    t: Optional[ComplexPair] = Field(None, description="Coupling t of the cubic model")
    branch_k: Optional[int] = Field(None, ge=0, le=2, description="beta-branch index")
    contour_pair: SectorPair = Field((1, 2), description="Convergence sectors joined by the contour")
    resolution: int = Field(settings.SIGN_MAP_RESOLUTION, ge=64, le=1024)
    refine: bool = Field(False, description="Repeat the embedding at doubled resolution")
    n: int = Field(24, ge=1, le=200, description="Polynomial degree and weight scale")
    precision_digits: int = Field(settings.PRECISION_DIGITS, ge=50)
    hinge: ComplexPair = Field(0j, description="Hinge point of the moment contour")
    grid: Optional[str] = Field(None, description="re_min:re_max:im_min:im_max:n")
    path: Optional[str] = Field(None, description="t0 -> t1")
    steps: int = Field(60, ge=1)
    tol_newton: float = Field(settings.TOL_NEWTON, gt=0)
    tol_quad: float = Field(settings.TOL_QUAD, gt=0)
    eps_hit: float = Field(settings.EPS_HIT, gt=0)
    threads: int = Field(settings.SCURVE_THREADS, ge=1)
    out: str = Field(settings.OUTPUT_DIR, min_length=1)
    format: Literal["json", "csv"] = "json"

    @field_validator("contour_pair")
    @classmethod
    def distinct_sectors(cls, value: SectorPair) -> SectorPair:
        i, j = value
        if i == j or min(i, j) < 0:
            raise ValueError("contour must join two distinct sectors")
        return value

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", exclude={"out"}), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    def apply(self) -> None:
        """Push tolerance overrides into the process-wide settings"""
        settings.TOL_NEWTON = self.tol_newton
        settings.TOL_QUAD = self.tol_quad
        settings.EPS_HIT = self.eps_hit
        settings.SIGN_MAP_RESOLUTION = self.resolution
        settings.PRECISION_DIGITS = self.precision_digits
        settings.SCURVE_THREADS = self.threads
