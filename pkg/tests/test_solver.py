"""Tests for the extrapolated proximal gradient loop."""

import numpy as np
import pytest

from pgex._exceptions import ArgumentError, ConfigurationError, NumericalError
from pgex.diagnostics import lyapunov_value
from pgex.objective import CompositeObjective
from pgex.problems import gen_lasso, lasso_objective, qp_objective, qp_start
from pgex.solver import (
    Constant,
    DualityGap,
    Fista,
    FistaBothRestarts,
    FistaFixedRestart,
    MaxIter,
    SuccessiveChange,
    resolve_alpha,
    run,
)
from pgex.types import LassoInstance, SimplexQpInstance, TerminationReason
from tests._oracles import ista_reference


def _half_norm_squared():
    return CompositeObjective(
        smooth_value=lambda x: 0.5 * float(x @ x),
        smooth_grad=lambda x: x,
        nonsmooth_value=lambda x: 0.0,
        prox=lambda v, step: v,
        modulus_L=1.0,
        dim=2,
        name="half-norm",
    )


@pytest.fixture
def lasso():
    rng = np.random.default_rng(11)
    A = rng.standard_normal((20, 10))
    b = rng.standard_normal(20)
    inst = LassoInstance(A=A, b=b, lam=1.0)
    return inst, lasso_objective(inst)


@pytest.fixture
def small_qp():
    inst = SimplexQpInstance(A=np.diag([2.0, -1.0]), b=np.zeros(2), s=1.0)
    return inst, qp_objective(inst)


def test_single_step_reaches_minimizer():
    """Test one step of PG minimizes 1/2 ||x||^2 with L = 1."""
    result = run(_half_norm_squared(), [3.0, 4.0], Constant(0.0), MaxIter(1))
    np.testing.assert_array_equal(result.x_final, [0.0, 0.0])
    assert result.iterations == 1
    assert result.trace.records[1].step_norm == 5.0
    assert result.final_objective == 0.0


def test_successive_change_stops():
    """Test the loop stops once iterates stop moving."""
    result = run(
        _half_norm_squared(), [3.0, 4.0], Constant(0.0), SuccessiveChange(1e-12) | MaxIter(10)
    )
    assert result.iterations == 2
    assert result.termination_reason is TerminationReason.SUCCESSIVE_CHANGE
    assert not result.capped


def test_zero_beta_matches_ista():
    """Test beta = 0 reproduces a plain proximal gradient loop on a desk LASSO."""
    inst = gen_lasso(50, 500, 5, seed=0)
    obj = lasso_objective(inst)
    result = run(obj, np.zeros(500), Constant(0.0), MaxIter(200))
    reference = ista_reference(inst.A, inst.b, inst.lam, obj.modulus_L, np.zeros(500), 200)
    assert len(result.trace.iterates) == 201
    for x, x_ref in zip(result.trace.iterates, reference):
        np.testing.assert_allclose(x, x_ref, rtol=0.0, atol=1e-10)


def test_trace_order_and_lyapunov_column(lasso):
    """Test record k describes x^k and H is recomputed exactly."""
    _, obj = lasso
    result = run(obj, np.zeros(10), FistaFixedRestart(20), MaxIter(60))
    for k, record in enumerate(result.trace.records):
        assert record.k == k
        assert record.H_value == lyapunov_value(record.F_value, record.step_norm, result.alpha)
        assert record.gap is not None
        assert record.residual is not None
    assert result.trace.records[0].beta == 0.0
    assert result.trace.records[0].step_norm == 0.0
    assert result.trace.records[21].restart


def test_default_alpha_is_window_midpoint(lasso):
    """Test alpha defaults to the midpoint of the admissible window."""
    _, obj = lasso
    assert resolve_alpha(obj, Constant(0.0), None) == pytest.approx(0.25 * obj.modulus_L)
    assert resolve_alpha(obj, Fista(), None) == pytest.approx(0.5 * obj.modulus_L)


def test_alpha_outside_window(lasso):
    """Test an explicit alpha outside the window."""
    _, obj = lasso
    with pytest.raises(ArgumentError, match="admissible window"):
        run(obj, np.zeros(10), Constant(0.0), MaxIter(5), alpha=obj.modulus_L)


def test_threshold_flags(lasso):
    """Test admissibility flags for constant and FISTA schedules."""
    _, obj = lasso
    pg = run(obj, np.zeros(10), Constant(0.0), MaxIter(3))
    assert pg.admissible and pg.threshold_strict
    assert pg.threshold == 1.0

    fista = run(obj, np.zeros(10), Fista(), MaxIter(3))
    assert fista.admissible
    assert not fista.threshold_strict


def test_capped_flag(lasso):
    """Test a run that hits the cap before its tolerance is flagged."""
    _, obj = lasso
    capped = run(obj, np.zeros(10), Fista(), DualityGap(1e-14) | MaxIter(3))
    assert capped.termination_reason is TerminationReason.MAX_ITER
    assert capped.iterations == 3
    assert capped.capped

    plain = run(obj, np.zeros(10), Fista(), MaxIter(3))
    assert not plain.capped


def test_start_outside_domain(small_qp):
    """Test x0 outside dom g."""
    _, obj = small_qp
    with pytest.raises(ArgumentError, match="outside the domain"):
        run(obj, np.zeros(2), Constant(0.0), MaxIter(5))


def test_start_wrong_length(lasso):
    """Test x0 of the wrong dimension."""
    _, obj = lasso
    with pytest.raises(ArgumentError, match="x0 has length 3"):
        run(obj, np.zeros(3), Constant(0.0), MaxIter(5))


def test_unbounded_rule(lasso):
    """Test rules without an iteration cap are rejected."""
    _, obj = lasso
    with pytest.raises(ConfigurationError, match="no iteration cap"):
        run(obj, np.zeros(10), Constant(0.0), SuccessiveChange(1e-6))


def test_gap_rule_without_dual(small_qp):
    """Test a gap rule on a problem without a dual hook."""
    inst, obj = small_qp
    with pytest.raises(ConfigurationError, match="no dual hook"):
        run(obj, qp_start(inst), Constant(0.0), DualityGap(1e-6) | MaxIter(5))


def test_fista_rejected_on_nonconvex(small_qp):
    """Test plain FISTA is refused when l > 0."""
    inst, obj = small_qp
    with pytest.raises(ArgumentError, match="convex smooth part"):
        run(obj, qp_start(inst), Fista(), MaxIter(5))
    result = run(obj, qp_start(inst), Fista(heuristic=True), MaxIter(5))
    assert not result.admissible


def test_qp_iterates_stay_feasible(small_qp):
    """Test every QP iterate lies on the simplex."""
    inst, obj = small_qp
    result = run(obj, qp_start(inst), Constant(0.7), SuccessiveChange(1e-10) | MaxIter(500))
    for x in result.trace.iterates:
        assert np.all(x >= 0.0)
        assert x.sum() == pytest.approx(1.0, abs=1e-12)
    # diag(2, -1) over {x1 + x2 = 1} is minimized at the vertex (0, 1).
    np.testing.assert_allclose(result.x_final, [0.0, 1.0], atol=1e-8)


def test_non_finite_gradient_attaches_trace():
    """Test a numerical failure carries the partial trace."""
    calls = []

    def grad(x):
        calls.append(1)
        return x if len(calls) < 2 else np.full_like(x, np.nan)

    obj = CompositeObjective(
        smooth_value=lambda x: 0.5 * float(x @ x),
        smooth_grad=grad,
        nonsmooth_value=lambda x: 0.0,
        prox=lambda v, step: v,
        modulus_L=2.0,
        dim=2,
    )
    with pytest.raises(NumericalError) as info:
        run(obj, [1.0, 1.0], Constant(0.0), MaxIter(10), record_residual=False)
    assert info.value.iteration == 1
    assert len(info.value.trace) == 2
    assert info.value.trace.last.k == 1


def test_schedule_state_reset_between_runs(lasso):
    """Test reusing a schedule object gives identical runs."""
    _, obj = lasso
    schedule = FistaBothRestarts(7)
    first = run(obj, np.zeros(10), schedule, MaxIter(30))
    second = run(obj, np.zeros(10), schedule, MaxIter(30))
    np.testing.assert_array_equal(first.x_final, second.x_final)


def test_keep_iterates_off(lasso):
    """Test iterates can be dropped from the trace."""
    _, obj = lasso
    result = run(obj, np.zeros(10), Constant(0.0), MaxIter(5), keep_iterates=False)
    assert len(result.trace) == 6
    assert result.trace.iterates == []
