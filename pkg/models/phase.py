from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np


class PhaseKind(str, Enum):
    ONE_CUT = "OneCut"
    TWO_CUT = "TwoCut"
    BOUNDARY = "Boundary"


class TransitionKind(str, Enum):
    SPLIT = "Split"
    MERGE = "Merge"
    BIRTH = "Birth"
    DEATH = "Death"
    BRANCH_CHANGE = "BranchChange"


@dataclass(frozen=True)
class PhaseBoundary:
    branch_k: int
    polyline: np.ndarray
    closed: bool
    stop_reason: str = ""


@dataclass(frozen=True)
class PhaseLabel:
    t: complex
    contour_pair: Tuple[int, int]
    kind: PhaseKind
    branch_k: Optional[int] = None
    evidence: Optional[object] = field(default=None, repr=False, compare=False)

    @property
    def label(self) -> str:
        if self.kind == PhaseKind.ONE_CUT:
            return f"OneCut({self.branch_k})"
        if self.kind == PhaseKind.BOUNDARY:
            return f"Boundary({self.branch_k})"
        return self.kind.value

    def same_phase(self, other: "PhaseLabel") -> bool:
        return self.kind == other.kind and self.branch_k == other.branch_k


@dataclass(frozen=True)
class TransitionEvent:
    kind: TransitionKind
    t: complex
    before: str
    after: str
    branch_k: Optional[int] = None


@dataclass(frozen=True)
class SCurveConfiguration:
    """The pipeline output behind a non-boundary phase label"""

    label: PhaseLabel
    solution: object
    graph: object = field(repr=False)
    cuts: Tuple[object, ...] = field(repr=False)
    sign_map: Optional[object] = field(default=None, repr=False)
