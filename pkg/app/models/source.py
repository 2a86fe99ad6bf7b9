from enum import Enum
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import settings

# Mean photon number of a source; 0 is the literal vacuum source.
Intensity = Annotated[float, Field(ge=0, allow_inf_nan=False)]
Probability = Annotated[float, Field(ge=0, le=1)]


class IntensityErrorDistribution(str, Enum):
    UNIFORM = "uniform"
    ENDPOINTS = "endpoints"


class SourceDecomposition(BaseModel):
    """Vacuum / single-photon / multi-photon weights of a coherent source."""
    model_config = ConfigDict(frozen=True)

    mu: Intensity
    p0: Probability
    p1: Probability
    c: Probability

    @model_validator(mode="after")
    def _normalized(self):
        if abs(self.p0 + self.p1 + self.c - 1.0) > settings.weight_tolerance:
            raise ValueError("p0 + p1 + c must equal 1")
        return self


class ResidualDecomposition(BaseModel):
    """Weights of the mu' source written over the mu source's rho_c plus a residual rho_d."""
    model_config = ConfigDict(frozen=True)

    mu: Intensity
    mu_prime: Intensity
    p0p: Probability
    p1p: Probability
    c_coeff: Probability
    d: Probability

    @model_validator(mode="after")
    def _normalized(self):
        if abs(self.p0p + self.p1p + self.c_coeff + self.d - 1.0) > settings.weight_tolerance:
            raise ValueError("p0' + p1' + c' + d must equal 1")
        return self


class ClassEpsilon(BaseModel):
    """Largest relative deviation of each photon-number class weight."""
    model_config = ConfigDict(frozen=True)

    eps0: float = Field(default=0.0, ge=0)
    eps1: float = Field(default=0.0, ge=0)
    epsc: float = Field(default=0.0, ge=0)

    def __add__(self, other: "ClassEpsilon") -> "ClassEpsilon":
        return ClassEpsilon(
            eps0=self.eps0 + other.eps0,
            eps1=self.eps1 + other.eps1,
            epsc=self.epsc + other.epsc,
        )
