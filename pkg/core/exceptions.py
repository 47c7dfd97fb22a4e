"""
Numerical error hierarchy

Every failure a service can report carries a stable ``code`` (used in the
machine-readable error envelope of the CLI) and a human readable ``detail``.
"""
from typing import Any, Dict, Optional


class SCurveError(Exception):
    """Base class for all numerical failures"""

    code: str = "scurve_error"
    exit_code: int = 1

    def __init__(self, detail: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(detail)
        self.detail = detail
        self.context = context or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "detail": self.detail, "context": self.context}


class EvaluationAtBranchPoint(SCurveError):
    code = "evaluation_at_branch_point"


class BranchCollision(SCurveError):
    code = "branch_collision"


class NoConvergence(SCurveError):
    code = "no_convergence"


class SingularJacobian(SCurveError):
    code = "singular_jacobian"


class IllConditionedPeriods(SCurveError):
    code = "ill_conditioned_periods"


class QuadratureFailure(SCurveError):
    code = "quadrature_failure"


class DegeneratePeriodRatio(SCurveError):
    code = "degenerate_period_ratio"


class EndpointCollision(SCurveError):
    code = "endpoint_collision"


class ContinuationStalled(SCurveError):
    code = "continuation_stalled"


class StepCollapse(SCurveError):
    code = "step_collapse"


class InconclusiveResolution(SCurveError):
    code = "inconclusive_resolution"


class NoSignChange(SCurveError):
    code = "no_sign_change"


class Unclassified(SCurveError):
    code = "unclassified"


class PrecisionExhausted(SCurveError):
    code = "precision_exhausted"


class DegenerateHankelMinor(SCurveError):
    code = "degenerate_hankel_minor"


class RootFindingStalled(SCurveError):
    code = "root_finding_stalled"
