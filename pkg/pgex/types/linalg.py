"""Linear algebra result types."""

from pydantic import BaseModel, ConfigDict, Field


class EigenEstimate(BaseModel):
    """An extremal eigenvalue estimate from power iteration."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., description="Rayleigh quotient at the final vector")
    residual: float = Field(..., ge=0.0, description="||Av - value*v|| / ||v|| at the final vector")
    iterations: int = Field(..., ge=0, description="Operator applications performed")
