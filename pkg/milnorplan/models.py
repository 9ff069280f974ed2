from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class TubeResiduals(BaseModel):
    """
    Membership of a point in the Milnor tube M(delta, epsilon).
    """
    level_residual: float = Field(..., description="||f(x)|| - delta.")
    ball_residual: float = Field(..., description="||x|| - epsilon; negative inside the ball.")
    inside: bool = Field(..., description="Both residuals within tolerance.")


class TubeCheckReport(BaseModel):
    """
    Empirical validation of the tube radii of a germ.
    """
    germ: str
    trials: int = Field(..., description="Number of sampled tube points attempted.")
    samples: int = Field(..., description="Number of retractions that landed in the tube.")
    failures: int = Field(0, description="Trials where no retraction converged.")
    min_singular_value: float = Field(..., description="Smallest singular value of the Jacobian over samples.")
    crowding_fraction: float = Field(..., description="Share of trials at ||x|| > 0.9 epsilon or exiting the ball.")
    passed: bool


class TransportReport(BaseModel):
    """
    Outcome of a horizontal lift through the Milnor fibration.
    """
    endpoint: List[float] = Field(..., description="Final point of the lift.")
    max_level_residual: float = Field(..., description="Max ||f(x(t)) - b(t)|| over accepted steps.")
    max_ball_excess: float = Field(..., description="Max of ||x(t)|| - epsilon over accepted steps (negative inside).")
    steps: int = Field(..., description="Number of integration steps taken.")
    displacement: Optional[float] = Field(None, description="||endpoint - start||, reported for loops.")


class SectionReport(BaseModel):
    """
    Verification of a cross-section s: p(s(b)) = b.
    """
    germ: str
    samples: int
    max_residual: float = Field(..., description="Max ||f(s(b)) - b|| over sampled base points.")
    closure_defect: float = Field(..., description="||s(0) - s(2 pi)|| for circle sections, spread near the antipode for radial ones.")
    tube_violations: int = Field(0, description="Sampled section values violating tube invariants.")
    passed: bool


class VerifyReport(BaseModel):
    """
    Result of one verification suite.
    """
    suite: str
    subject: str = Field(..., description="Germ name or sphere S^m the suite ran on.")
    trials: int
    passes: int
    failures: int
    worst_residuals: Dict[str, float] = Field(default_factory=dict)
    continuity_moduli: Dict[str, float] = Field(default_factory=dict)
    regions_observed: List[int] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)
    passed: bool


class AggregateReport(BaseModel):
    """
    Merged suite reports, ordered by suite name.
    """
    seed: int
    suites: List[VerifyReport]
    passed: bool


class TaskPlanSummary(BaseModel):
    """
    Machine-readable metadata of a tasking plan.
    """
    germ: str
    region: int
    tc_value: int
    start: List[float]
    target: List[float]
    endpoint_residual: float = Field(..., description="||f(alpha(1)) - A||.")
    max_level_residual: float
    steps: int


class TraceHeader(BaseModel):
    """
    Metadata stored with exported traces.
    """
    kind: str = Field(..., description="What the trace shows: sphere-plan, task-plan, lift, section.")
    germ: Optional[str] = None
    planner: Optional[str] = None
    region: Optional[int] = None
    columns: List[str]
    samples: int
