"""Type definitions for pgex."""

from .common import ArrayModel, DenseMatrix, Family, TerminationReason, Vector
from .diagnostics import AuditReport, RateFit
from .experiment import (
    AlgorithmSummary,
    BatchSummary,
    ExperimentConfig,
    ExperimentReport,
    RunSummary,
    ScheduleSpec,
)
from .linalg import EigenEstimate
from .problems import GapInfo, LassoInstance, LogisticInstance, SimplexQpInstance
from .solver import IterateTrace, SolveResult, StepResult, TraceRecord

__all__ = [
    "ArrayModel",
    "DenseMatrix",
    "Vector",
    "Family",
    "TerminationReason",
    "EigenEstimate",
    "LassoInstance",
    "LogisticInstance",
    "SimplexQpInstance",
    "GapInfo",
    "StepResult",
    "TraceRecord",
    "IterateTrace",
    "SolveResult",
    "RateFit",
    "AuditReport",
    "ScheduleSpec",
    "ExperimentConfig",
    "RunSummary",
    "AlgorithmSummary",
    "BatchSummary",
    "ExperimentReport",
]
