"""Common type definitions."""

from enum import Enum

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict
from typing_extensions import TypeAlias

# Dense row-major float64 arrays: ``DenseMatrix`` is 2-d, ``Vector`` is 1-d.
Vector: TypeAlias = npt.NDArray[np.float64]
DenseMatrix: TypeAlias = npt.NDArray[np.float64]


class ArrayModel(BaseModel):
    """Base model for records that carry numpy arrays."""

    model_config = ConfigDict(arbitrary_types_allowed=True)


class Family(str, Enum):
    """Supported problem families."""

    LASSO = "lasso"
    LOGISTIC = "logistic"
    QP = "qp"


class TerminationReason(str, Enum):
    """Which stopping test ended a run."""

    MAX_ITER = "max_iter"
    SUCCESSIVE_CHANGE = "successive_change"
    DUALITY_GAP = "duality_gap"
    RESIDUAL = "residual"
