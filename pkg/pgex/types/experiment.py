"""Experiment configuration and summary type definitions."""

from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .common import Family

ScheduleKind = Literal[
    "none",
    "constant",
    "constant-frac",
    "fista",
    "fista-fixed",
    "fista-adaptive",
    "fista-both",
]

# Kinds whose numeric parameter is mandatory.
_NEEDS_PARAM = {"constant", "constant-frac"}


class ScheduleSpec(BaseModel):
    """One extrapolation schedule requested on the command line or in a config file."""

    model_config = ConfigDict(frozen=True)

    kind: ScheduleKind
    param: Optional[float] = Field(
        None, description="beta, fraction of the threshold, or restart interval K"
    )

    @model_validator(mode="after")
    def _check_param(self) -> "ScheduleSpec":
        if self.kind in _NEEDS_PARAM and self.param is None:
            raise ValueError(f"schedule '{self.kind}' needs a numeric parameter")
        if self.kind in ("none", "fista", "fista-adaptive") and self.param is not None:
            raise ValueError(f"schedule '{self.kind}' takes no parameter")
        if self.param is not None and self.param < 0:
            raise ValueError(f"schedule parameter must be nonnegative, got {self.param}")
        if self.kind in ("fista-fixed", "fista-both") and self.param is not None:
            if self.param < 1 or self.param != int(self.param):
                raise ValueError(f"restart interval must be a positive integer, got {self.param}")
        return self

    def label(self, K: int) -> str:
        """Short name used in file names and summaries."""
        if self.kind == "none":
            return "pg"
        if self.kind == "constant":
            return f"constant-{self.param:g}"
        if self.kind == "constant-frac":
            return f"pge-{self.param:g}"
        if self.kind in ("fista-fixed", "fista-both"):
            interval = int(self.param) if self.param is not None else K
            return f"{self.kind}-{interval}"
        return self.kind


class ExperimentConfig(BaseModel):
    """Settings for a single run or a batch; defaults are the desk-scale protocol."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    family: Family = Family.LASSO
    m: int = Field(50, ge=1, description="Rows of A (convex families)")
    n: Optional[int] = Field(None, ge=1, description="Columns of A, or QP dimension")
    s_sparsity: int = Field(5, ge=1, description="Nonzeros in the generating vector")
    lam: float = Field(5.0, gt=0.0, alias="lambda", description="Regularization weight")
    simplex_s: Optional[float] = Field(
        None, gt=0.0, alias="s", description="Fixed simplex scale for QP"
    )
    schedules: List[ScheduleSpec] = Field(default_factory=list)
    K: int = Field(500, ge=1, description="Fixed restart interval")
    tol: float = Field(1e-6, gt=0.0, description="Tolerance of the family's stopping test")
    max_iter: int = Field(5000, ge=1)
    alpha: Optional[float] = Field(None, ge=0.0, description="Lyapunov weight; None is midpoint")
    seed: int = Field(0, ge=0)
    instances: int = Field(1, ge=1, description="Instance count for batch mode")
    output_dir: Path = Field(Path("pgex-out"))
    workers: Optional[int] = Field(None, ge=1)
    preset: Optional[Literal["desk", "full"]] = None
    instance_path: Optional[Path] = Field(None, description="Replay a saved instance")
    save_instance: bool = False

    @field_validator("family", mode="before")
    @classmethod
    def _lower_family(cls, value):
        return value.lower() if isinstance(value, str) else value

    @model_validator(mode="after")
    def _check_family(self) -> "ExperimentConfig":
        if self.n is None:
            self.n = 200 if self.family is Family.QP else 500
        if self.family is not Family.QP and self.s_sparsity > self.n:
            raise ValueError(f"s_sparsity={self.s_sparsity} exceeds n={self.n}")
        if self.simplex_s is not None and self.family is not Family.QP:
            raise ValueError("simplex_s only applies to the qp family")
        return self


class RunSummary(BaseModel):
    """Outcome of one schedule on one instance."""

    schedule: str
    instance: int = Field(0, ge=0)
    seed: int = 0
    iterations: Optional[int] = None
    termination_reason: Optional[str] = None
    final_objective: Optional[float] = None
    capped: bool = False
    admissible: Optional[bool] = None
    error: Optional[str] = Field(None, description="Failure message; other fields are then unset")

    @property
    def completed(self) -> bool:
        return self.error is None


class AlgorithmSummary(BaseModel):
    """Means over the completed runs of one schedule."""

    schedule: str
    completed: int = Field(..., ge=0)
    failed: int = Field(0, ge=0)
    mean_iterations: Optional[float] = None
    mean_objective: Optional[float] = None


class BatchSummary(BaseModel):
    """Per-algorithm iteration and objective means over a batch."""

    family: Family
    instances: int = Field(..., ge=0)
    runs: List[RunSummary] = Field(default_factory=list)
    algorithms: List[AlgorithmSummary] = Field(default_factory=list)

    def algorithm(self, schedule: str) -> AlgorithmSummary:
        for summary in self.algorithms:
            if summary.schedule == schedule:
                return summary
        raise KeyError(schedule)

    @property
    def failures(self) -> List[RunSummary]:
        return [run for run in self.runs if not run.completed]


class ExperimentReport(BaseModel):
    """Runs of a single-instance experiment and the files written for them."""

    runs: List[RunSummary] = Field(default_factory=list)
    files: List[Path] = Field(default_factory=list)

    @property
    def exit_status(self) -> int:
        """0 when every run satisfied its stopping test, 4 when some hit the iteration cap."""
        return 4 if any(run.capped for run in self.runs) else 0
