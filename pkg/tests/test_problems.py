"""Tests for the problem families and instance generators."""

import math

import numpy as np
import pytest

from pgex._exceptions import ArgumentError, NumericalError
from pgex.objective import objective_value
from pgex.problems import (
    FAMILIES,
    derive_seed,
    gen_lasso,
    gen_logistic,
    gen_qp,
    lasso_dual,
    lasso_gap,
    lasso_objective,
    logistic_dual,
    logistic_gap,
    logistic_objective,
    qp_moduli,
    qp_objective,
    qp_start,
)
from pgex.types import ExperimentConfig, Family, LassoInstance, LogisticInstance, SimplexQpInstance
from tests._oracles import central_difference, jacobi_eigenvalues


@pytest.fixture
def rng():
    return np.random.default_rng(3)


def test_lasso_value_and_gradient_at_zero(rng):
    """Test F(0) = 1/2 ||b||^2 and grad f(0) = -A^T b."""
    inst = gen_lasso(8, 12, 3, seed=1, lam=2.0)
    obj = lasso_objective(inst)
    assert objective_value(obj, np.zeros(12)) == pytest.approx(0.5 * inst.b @ inst.b)
    np.testing.assert_allclose(obj.smooth_grad(np.zeros(12)), -inst.A.T @ inst.b)


def test_lasso_gradient_matches_central_difference(rng):
    """Test the LASSO gradient against finite differences."""
    obj = lasso_objective(gen_lasso(8, 12, 3, seed=2))
    x = rng.standard_normal(12)
    np.testing.assert_allclose(
        obj.smooth_grad(x), central_difference(obj.smooth_value, x), rtol=1e-6, atol=1e-4
    )


def test_lasso_modulus():
    """Test L = lambda_max(A^T A) up to the inflation."""
    inst = gen_lasso(6, 9, 2, seed=4)
    expected = jacobi_eigenvalues(inst.A.T @ inst.A)[-1]
    assert lasso_objective(inst).modulus_L == pytest.approx(expected, rel=1e-6)
    assert lasso_objective(inst).modulus_l == 0.0


def test_lasso_gap_at_solution():
    """Test the gap vanishes at a KKT point."""
    inst = LassoInstance(A=np.eye(2), b=[2.0, 0.0], lam=1.0)
    info = lasso_gap(inst, np.array([1.0, 0.0]))
    assert info.gap == 0.0
    assert info.dual_value == 1.5
    assert info.feas_violation is None
    assert lasso_dual(inst, np.zeros(2)) == 0.0


def test_lasso_weak_duality(rng):
    """Test d(u) <= F(x) at random points."""
    inst = gen_lasso(10, 20, 4, seed=5, lam=1.0)
    obj = lasso_objective(inst)
    for _ in range(20):
        x = rng.standard_normal(20)
        info = lasso_gap(inst, x)
        assert np.max(np.abs(inst.A.T @ info.u)) <= inst.lam * (1.0 + 1e-12)
        assert info.dual_value <= objective_value(obj, x) + 1e-9


def test_logistic_value_at_zero():
    """Test f(0) = m log 2."""
    inst = gen_logistic(10, 6, 2, seed=3)
    obj = logistic_objective(inst)
    assert obj.dim == 7
    assert obj.smooth_value(np.zeros(7)) == pytest.approx(10 * math.log(2.0), rel=1e-14)


def test_logistic_gradient_matches_central_difference(rng):
    """Test the logistic gradient against finite differences."""
    obj = logistic_objective(gen_logistic(10, 6, 2, seed=6))
    x = 0.3 * rng.standard_normal(7)
    np.testing.assert_allclose(
        obj.smooth_grad(x), central_difference(obj.smooth_value, x), rtol=1e-6, atol=1e-6
    )


def test_logistic_prox_keeps_intercept():
    """Test the prox leaves the intercept untouched."""
    inst = LogisticInstance(A=np.eye(2), b=[1.0, -1.0], lam=1.0)
    obj = logistic_objective(inst)
    np.testing.assert_array_equal(obj.prox(np.array([3.0, 3.0, 3.0]), 1.0), [2.0, 2.0, 3.0])
    assert obj.nonsmooth_value(np.array([1.0, -1.0, 100.0])) == 2.0


def test_logistic_dual_at_half():
    """Test d(u) = m log 2 when every q_i is 1/2."""
    inst = LogisticInstance(A=np.eye(2), b=[1.0, -1.0])
    assert logistic_dual(inst, -0.5 * inst.b) == pytest.approx(2 * math.log(2.0), rel=1e-14)
    assert logistic_dual(inst, np.zeros(2)) == 0.0
    with pytest.raises(NumericalError, match="outside"):
        logistic_dual(inst, inst.b)


def test_logistic_balanced_labels_feasible():
    """Test the feasibility violation vanishes at 0 for balanced labels."""
    inst = LogisticInstance(A=np.eye(2), b=[1.0, -1.0], lam=5.0)
    info = logistic_gap(inst, np.zeros(3))
    assert info.feas_violation == 0.0
    np.testing.assert_allclose(info.u, [-0.5, 0.5])


def test_logistic_weak_duality(rng):
    """Test d(u) <= F(x) + |e^T u| |x0| at random points."""
    inst = gen_logistic(12, 8, 3, seed=9, lam=1.0)
    obj = logistic_objective(inst)
    for _ in range(20):
        x = rng.standard_normal(9)
        info = logistic_gap(inst, x)
        slack = abs(info.u.sum()) * abs(x[-1])
        assert info.dual_value <= objective_value(obj, x) + slack + 1e-9


def test_qp_moduli_diagonal():
    """Test L = max(lambda_max, |lambda_min|) and l = |lambda_min|."""
    L, l = qp_moduli(np.diag([2.0, -1.0]))
    assert L == pytest.approx(2.0, rel=1e-6)
    assert l == pytest.approx(1.0, rel=1e-6)

    L, l = qp_moduli(np.diag([1.0, -3.0]))
    assert L == pytest.approx(3.0, rel=1e-6)
    assert l == pytest.approx(3.0, rel=1e-6)

    L, l = qp_moduli(np.diag([2.0, 1.0]))
    assert l == pytest.approx(1.0, rel=1e-6)
    assert L == pytest.approx(2.0, rel=1e-6)


def test_qp_objective_and_start():
    """Test the QP value, gradient and start."""
    inst = SimplexQpInstance(A=[[2.0, 1.0], [1.0, -1.0]], b=[1.0, 0.0], s=2.0)
    obj = qp_objective(inst)
    x0 = qp_start(inst)
    np.testing.assert_allclose(x0, [1.0, 1.0])
    # 1/2 (2 + 2 - 1) - 1 = 0.5
    assert objective_value(obj, x0) == pytest.approx(0.5)
    np.testing.assert_allclose(obj.smooth_grad(x0), [2.0, 0.0])
    assert obj.dual_gap is None


def test_gen_lasso_deterministic():
    """Test generators are deterministic in the seed."""
    a, b = gen_lasso(20, 50, 5, seed=3), gen_lasso(20, 50, 5, seed=3)
    np.testing.assert_array_equal(a.A, b.A)
    np.testing.assert_array_equal(a.b, b.b)
    assert np.count_nonzero(a.x_true) == 5
    assert not np.array_equal(a.A, gen_lasso(20, 50, 5, seed=4).A)


def test_gen_lasso_invalid():
    """Test invalid generator dimensions."""
    with pytest.raises(ArgumentError, match="sparsity"):
        gen_lasso(5, 4, 5, seed=0)
    with pytest.raises(ArgumentError, match="nonnegative integer"):
        gen_lasso(5, 4, 1, seed=-1)


def test_gen_logistic_labels():
    """Test labels are +-1, mixed, and c lies in [0, 1]."""
    for seed in range(5):
        inst = gen_logistic(30, 40, 4, seed=seed)
        assert set(np.unique(inst.b)) == {-1.0, 1.0}
        assert 0.0 <= inst.c <= 1.0
        expected = np.where(inst.A @ inst.x_true + inst.c >= 0.0, 1.0, -1.0)
        np.testing.assert_array_equal(inst.b, expected)


def test_gen_logistic_single_row():
    """Test a single sample can never carry mixed labels."""
    with pytest.raises(ArgumentError, match="could not draw mixed labels"):
        gen_logistic(1, 3, 1, seed=0)


def test_gen_qp():
    """Test the QP generator."""
    inst = gen_qp(10, seed=8)
    np.testing.assert_array_equal(inst.A, inst.A.T)
    assert 1.0 <= inst.s <= 10.0
    fixed = gen_qp(10, seed=8, s=3.0)
    assert fixed.s == 3.0
    np.testing.assert_array_equal(fixed.A, inst.A)
    np.testing.assert_array_equal(fixed.b, inst.b)


def test_derive_seed():
    """Test per-instance seeds are deterministic and distinct."""
    seeds = [derive_seed(0, i) for i in range(50)]
    assert seeds == [derive_seed(0, i) for i in range(50)]
    assert len(set(seeds)) == 50
    assert derive_seed(1, 0) != derive_seed(0, 0)
    with pytest.raises(ArgumentError):
        derive_seed(0, -1)


def test_families_registry():
    """Test each family builds an instance, objective and feasible start."""
    for family in Family:
        entry = FAMILIES[family]
        config = ExperimentConfig(family=family, m=6, n=8, s_sparsity=2)
        inst = entry.generate(config, 1)
        obj = entry.objective(inst)
        x0 = entry.start(inst)
        assert x0.shape == (obj.dim,)
        assert math.isfinite(objective_value(obj, x0))
        assert entry.default_rule(1e-6, 100).bounded
        assert entry.default_schedules


def _family_objective(name):
    if name == "lasso":
        return lasso_objective(gen_lasso(20, 30, 3, seed=21))
    if name == "logistic":
        return logistic_objective(gen_logistic(20, 30, 3, seed=22))
    return qp_objective(gen_qp(20, seed=23))


@pytest.mark.parametrize("family", ["lasso", "logistic", "qp"])
def test_gradient_matches_central_difference_at_random_points(family, rng):
    """Test the smooth gradient against finite differences at 100 random points."""
    obj = _family_objective(family)
    for _ in range(100):
        x = rng.standard_normal(obj.dim)
        grad = obj.smooth_grad(x)
        error = np.linalg.norm(grad - central_difference(obj.smooth_value, x))
        assert error <= max(1e-5, 1e-5 * np.linalg.norm(grad))


@pytest.mark.parametrize("family", ["lasso", "logistic", "qp"])
def test_gradient_is_lipschitz_on_random_pairs(family, rng):
    """Test ||grad f(u) - grad f(v)|| <= L ||u - v|| on 1000 random pairs."""
    obj = _family_objective(family)
    for _ in range(1000):
        u = rng.standard_normal(obj.dim)
        v = u + rng.standard_normal(obj.dim) * rng.uniform(1e-3, 10.0)
        lhs = np.linalg.norm(obj.smooth_grad(u) - obj.smooth_grad(v))
        assert lhs <= obj.modulus_L * (1.0 + 1e-6) * np.linalg.norm(u - v)
