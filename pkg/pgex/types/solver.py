"""Solver type definitions: step results, per-iteration records and run results."""

from typing import List, Optional

import numpy as np
from pydantic import Field

from .common import ArrayModel, TerminationReason


class StepResult(ArrayModel):
    """Outcome of one forward-backward step taken from an extrapolated point."""

    x_next: np.ndarray = Field(..., description="prox(y - grad f(y)/L, 1/L)")
    f_grad_at_y: np.ndarray = Field(..., description="Gradient of the smooth part at y")
    objective_at_next: float = Field(..., description="F(x_next) = f(x_next) + g(x_next)")


class TraceRecord(ArrayModel):
    """Per-iteration record describing the iterate x^k."""

    k: int = Field(..., ge=0, description="Iteration index of x^k")
    F_value: float = Field(..., description="F(x^k)")
    H_value: float = Field(..., description="F(x^k) + alpha*||x^k - x^{k-1}||^2")
    step_norm: float = Field(..., ge=0.0, description="||x^k - x^{k-1}||")
    residual: Optional[float] = Field(None, description="Stationarity residual at x^k")
    gap: Optional[float] = Field(None, description="Relative duality gap at x^k")
    feas_violation: Optional[float] = Field(None, description="Weighted dual feasibility violation")
    dual_value: Optional[float] = Field(None, description="Dual objective at the scaled dual point")
    beta: float = Field(0.0, description="Extrapolation coefficient used to produce x^k")
    restart: bool = Field(False, description="Whether the momentum was reset for that coefficient")

    @property
    def gap_criterion(self) -> Optional[float]:
        """Quantity compared against the duality-gap tolerance, if a gap was recorded."""
        if self.gap is None or self.feas_violation is None:
            return self.gap
        return max(self.gap, self.feas_violation)


class IterateTrace(ArrayModel):
    """Record stream of a run, optionally with the iterates themselves."""

    records: List[TraceRecord] = Field(default_factory=list)
    iterates: List[np.ndarray] = Field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def append(self, record: TraceRecord, x: Optional[np.ndarray] = None) -> None:
        """Append a record; ``k`` must continue the sequence."""
        expected = len(self.records)
        if record.k != expected:
            raise ValueError(f"trace record k={record.k} out of order, expected {expected}")
        self.records.append(record)
        if x is not None:
            self.iterates.append(x.copy())

    def column(self, name: str) -> np.ndarray:
        """Return one record field across the trace as a float array (None becomes NaN)."""
        values = [getattr(r, name) for r in self.records]
        return np.array([np.nan if v is None else v for v in values], dtype=np.float64)

    @property
    def last(self) -> TraceRecord:
        return self.records[-1]


class SolveResult(ArrayModel):
    """Result of a solver run."""

    x_final: np.ndarray
    iterations: int = Field(..., ge=0)
    termination_reason: TerminationReason
    trace: IterateTrace
    schedule: str = Field(..., description="Name of the extrapolation schedule")
    alpha: float = Field(..., description="Lyapunov weight used for the H column")
    beta_bar: float = Field(..., description="Supremum of the schedule's coefficients")
    threshold: float = Field(..., description="sqrt(L/(L+l)) for the objective")
    admissible: bool = Field(..., description="beta_bar <= threshold")
    threshold_strict: bool = Field(..., description="beta_bar < threshold strictly")
    capped: bool = Field(
        False, description="Iteration cap fired while the rule also held other tests"
    )

    @property
    def final_objective(self) -> float:
        return self.trace.last.F_value
