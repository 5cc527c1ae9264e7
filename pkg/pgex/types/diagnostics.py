"""Diagnostics type definitions."""

from typing import List, Optional

from pydantic import BaseModel, Field


class RateFit(BaseModel):
    """Least-squares fit of log(residual_k) = a + slope*k over a tail of a series."""

    ratio_estimate: float = Field(..., description="exp(slope); below 1 means linear decay")
    slope: float
    intercept: float
    r_squared: float = Field(..., ge=0.0, le=1.0)
    tail_start: int = Field(..., ge=0, description="Index of the first fitted point")
    points: int = Field(..., ge=10, description="Number of fitted points")
    clamped: bool = Field(False, description="Some entries were below 1e-300 and were clamped")


class AuditReport(BaseModel):
    """Invariant audit of a run at one Lyapunov weight alpha."""

    alpha: float
    monotone: bool = Field(..., description="H column nonincreasing within tolerance")
    first_violation: Optional[int] = None
    decrease_violations: List[int] = Field(default_factory=list)
    descent_violations: List[int] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.monotone and not self.decrease_violations and not self.descent_violations
