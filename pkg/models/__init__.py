from models.polynomial import ComplexPolynomial, LaurentSeries, BranchedRadical
from models.solutions import OneCutSolution, CubicBranchPoint, TwoCutSolution
from models.abelian import DifferentialBasis, PeriodMatrix
from models.stokes import (
    SpectralCurve,
    StokesLine,
    StokesGraph,
    Short,
    Leg,
    Critical,
    SignMap,
    CutCandidate,
    EmbeddingReport,
)
from models.phase import PhaseBoundary, PhaseKind, PhaseLabel, SCurveConfiguration, TransitionEvent, TransitionKind
from models.orthopoly import MomentTable, RecurrenceCoefficients, ZeroSet, ZeroComparison

__all__ = [
    "ComplexPolynomial",
    "LaurentSeries",
    "BranchedRadical",
    "OneCutSolution",
    "CubicBranchPoint",
    "TwoCutSolution",
    "DifferentialBasis",
    "PeriodMatrix",
    "SpectralCurve",
    "StokesLine",
    "StokesGraph",
    "Short",
    "Leg",
    "Critical",
    "SignMap",
    "CutCandidate",
    "EmbeddingReport",
    "PhaseBoundary",
    "PhaseLabel",
    "SCurveConfiguration",
    "PhaseKind",
    "TransitionEvent",
    "TransitionKind",
    "MomentTable",
    "RecurrenceCoefficients",
    "ZeroSet",
    "ZeroComparison",
]
