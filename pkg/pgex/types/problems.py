"""Problem instance type definitions."""

from functools import cached_property
from typing import ClassVar, Optional

import numpy as np
from pydantic import ConfigDict, Field, field_validator, model_validator

from ..linalg import as_dense_matrix
from .common import ArrayModel, Family

SYMMETRY_TOL = 1e-12


def _as_matrix(value) -> np.ndarray:
    return as_dense_matrix(value)


def _as_vector(value) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


class _Instance(ArrayModel):
    A: np.ndarray = Field(..., description="Data matrix")
    b: np.ndarray = Field(..., description="Data vector")
    seed: int = Field(0, description="Generator seed the instance was drawn with")

    @field_validator("A", mode="before")
    @classmethod
    def _validate_matrix(cls, value):
        return _as_matrix(value)

    @field_validator("b", mode="before")
    @classmethod
    def _validate_vector(cls, value):
        return _as_vector(value)


class LassoInstance(_Instance):
    """min 1/2 ||Ax - b||^2 + lam ||x||_1."""

    family: ClassVar[Family] = Family.LASSO
    lam: float = Field(5.0, gt=0.0, alias="lambda", description="Regularization weight")
    x_true: Optional[np.ndarray] = Field(None, description="Sparse vector b was generated from")

    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)

    @model_validator(mode="after")
    def _check_shapes(self) -> "LassoInstance":
        if self.b.shape[0] != self.A.shape[0]:
            raise ValueError(f"b has length {self.b.shape[0]}, expected {self.A.shape[0]}")
        return self


class LogisticInstance(_Instance):
    """min sum log(1 + exp(-b_i (a_i^T x~ + x0))) + lam ||x~||_1 with labels b_i in {-1, +1}."""

    family: ClassVar[Family] = Family.LOGISTIC
    lam: float = Field(5.0, gt=0.0, alias="lambda", description="Regularization weight")
    c: Optional[float] = Field(None, description="Label offset used by the generator")
    x_true: Optional[np.ndarray] = Field(None, description="Sparse vector labels were drawn from")

    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)

    @model_validator(mode="after")
    def _check_labels(self) -> "LogisticInstance":
        if self.b.shape[0] != self.A.shape[0]:
            raise ValueError(f"b has length {self.b.shape[0]}, expected {self.A.shape[0]}")
        if not np.all(np.abs(self.b) == 1.0):
            raise ValueError("labels must be -1 or +1")
        if np.all(self.b == self.b[0]):
            raise ValueError("labels must not all be the same")
        return self

    @cached_property
    def D(self) -> np.ndarray:
        """Rows (a_i^T, 1): the intercept is the last coordinate."""
        return np.hstack([self.A, np.ones((self.A.shape[0], 1))])


class SimplexQpInstance(_Instance):
    """min 1/2 x^T A x - b^T x subject to e^T x = s, x >= 0, with A symmetric."""

    family: ClassVar[Family] = Family.QP
    s: float = Field(..., gt=0.0, description="Simplex scale")

    @model_validator(mode="after")
    def _check_symmetric(self) -> "SimplexQpInstance":
        n, cols = self.A.shape
        if n != cols:
            raise ValueError(f"A must be square, got shape {self.A.shape}")
        if not np.allclose(self.A, self.A.T, rtol=0.0, atol=SYMMETRY_TOL):
            raise ValueError("A must be symmetric")
        if self.b.shape[0] != n:
            raise ValueError(f"b has length {self.b.shape[0]}, expected {n}")
        return self


class GapInfo(ArrayModel):
    """Duality gap evaluation at a primal point."""

    gap: float = Field(..., ge=0.0, description="|F(x) - d(u)| / max(F(x), 1)")
    feas_violation: Optional[float] = Field(None, description="50|e^T u| / max(||u||, 1)")
    dual_value: float = Field(..., description="d(u)")
    u: np.ndarray = Field(..., description="Scaled dual-feasible point")
