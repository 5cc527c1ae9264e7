"""Stopping tests, composable with ``|`` (any fires) and ``&`` (all fire)."""

from typing import Optional, Sequence, Tuple

import numpy as np

from .._exceptions import ArgumentError, ConfigurationError
from .._utils import validate_positive
from ..types.common import TerminationReason, Vector
from ..types.solver import TraceRecord


class TerminationRule:
    """Base class for stopping tests evaluated on the latest trace record."""

    requires_gap = False
    requires_residual = False

    @property
    def bounded(self) -> bool:
        """Whether the rule is guaranteed to fire after finitely many iterations."""
        return False

    @property
    def reasons(self) -> Tuple[TerminationReason, ...]:
        raise NotImplementedError()

    def check(self, record: TraceRecord, x: Vector) -> Optional[TerminationReason]:
        raise NotImplementedError()

    def __or__(self, other: "TerminationRule") -> "AnyOf":
        return AnyOf([self, other])

    def __and__(self, other: "TerminationRule") -> "AllOf":
        return AllOf([self, other])


def _check_tol(tol: float) -> float:
    return validate_positive(tol, name="tolerance")


class MaxIter(TerminationRule):
    """Fires once ``n`` iterations have been completed."""

    def __init__(self, n: int) -> None:
        if n < 1:
            raise ArgumentError(f"iteration cap must be at least 1, got {n}")
        self.n = int(n)

    @property
    def bounded(self) -> bool:
        return True

    @property
    def reasons(self) -> Tuple[TerminationReason, ...]:
        return (TerminationReason.MAX_ITER,)

    def check(self, record: TraceRecord, x: Vector) -> Optional[TerminationReason]:
        return TerminationReason.MAX_ITER if record.k >= self.n else None

    def __repr__(self) -> str:
        return f"MaxIter({self.n})"


class SuccessiveChange(TerminationRule):
    """||x^k - x^{k-1}|| / max(||x^k||, 1) <= tol."""

    def __init__(self, tol: float) -> None:
        self.tol = _check_tol(tol)

    @property
    def reasons(self) -> Tuple[TerminationReason, ...]:
        return (TerminationReason.SUCCESSIVE_CHANGE,)

    def check(self, record: TraceRecord, x: Vector) -> Optional[TerminationReason]:
        relative = record.step_norm / max(float(np.linalg.norm(x)), 1.0)
        return TerminationReason.SUCCESSIVE_CHANGE if relative <= self.tol else None

    def __repr__(self) -> str:
        return f"SuccessiveChange({self.tol!r})"


class DualityGap(TerminationRule):
    """The problem's gap criterion (including dual feasibility, if it has one) <= tol."""

    requires_gap = True

    def __init__(self, tol: float) -> None:
        self.tol = _check_tol(tol)

    @property
    def reasons(self) -> Tuple[TerminationReason, ...]:
        return (TerminationReason.DUALITY_GAP,)

    def check(self, record: TraceRecord, x: Vector) -> Optional[TerminationReason]:
        criterion = record.gap_criterion
        if criterion is None:
            raise ConfigurationError("duality-gap rule evaluated on a record without a gap")
        return TerminationReason.DUALITY_GAP if criterion <= self.tol else None

    def __repr__(self) -> str:
        return f"DualityGap({self.tol!r})"


class Residual(TerminationRule):
    """Stationarity residual <= tol."""

    requires_residual = True

    def __init__(self, tol: float) -> None:
        self.tol = _check_tol(tol)

    @property
    def reasons(self) -> Tuple[TerminationReason, ...]:
        return (TerminationReason.RESIDUAL,)

    def check(self, record: TraceRecord, x: Vector) -> Optional[TerminationReason]:
        if record.residual is None:
            raise ConfigurationError("residual rule evaluated on a record without a residual")
        return TerminationReason.RESIDUAL if record.residual <= self.tol else None

    def __repr__(self) -> str:
        return f"Residual({self.tol!r})"


class _Composite(TerminationRule):
    def __init__(self, rules: Sequence[TerminationRule]) -> None:
        if not rules:
            raise ArgumentError("a composite rule needs at least one member")
        flat = []
        for rule in rules:
            # (a | b) | c flattens to one AnyOf; likewise for AllOf.
            flat.extend(rule.rules if type(rule) is type(self) else [rule])
        self.rules = flat

    @property
    def requires_gap(self) -> bool:  # type: ignore[override]
        return any(r.requires_gap for r in self.rules)

    @property
    def requires_residual(self) -> bool:  # type: ignore[override]
        return any(r.requires_residual for r in self.rules)

    @property
    def reasons(self) -> Tuple[TerminationReason, ...]:
        return tuple(reason for r in self.rules for reason in r.reasons)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.rules!r})"


class AnyOf(_Composite):
    """Fires when any member fires; reports the first member that did."""

    @property
    def bounded(self) -> bool:
        return any(r.bounded for r in self.rules)

    def check(self, record: TraceRecord, x: Vector) -> Optional[TerminationReason]:
        for rule in self.rules:
            reason = rule.check(record, x)
            if reason is not None:
                return reason
        return None


class AllOf(_Composite):
    """Fires when every member fires; reports the first member's reason."""

    @property
    def bounded(self) -> bool:
        return all(r.bounded for r in self.rules)

    def check(self, record: TraceRecord, x: Vector) -> Optional[TerminationReason]:
        reasons = [rule.check(record, x) for rule in self.rules]
        if all(reason is not None for reason in reasons):
            return reasons[0]
        return None


def check_termination(
    rule: TerminationRule, record: TraceRecord, x: Vector
) -> Optional[TerminationReason]:
    """Evaluate ``rule`` on the latest record (at least one completed iteration).

    Raises:
        ArgumentError: If called on the initial record (k = 0)
    """
    if record.k < 1:
        raise ArgumentError("termination is checked only after a completed iteration")
    return rule.check(record, x)
