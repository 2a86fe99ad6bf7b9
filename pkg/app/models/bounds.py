from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import settings

EPSILON_CAP = Field(default=0.0, ge=0, lt=0.5)


class BoundMethod(str, Enum):
    HWANG = "hwang"
    CRUDE = "crude"
    ASYMPTOTIC_3 = "asymptotic"
    FLUCTUATION = "fluctuation"
    OPERATIONAL = "operational"


class FluctuationParams(BaseModel):
    """Pulse counts per source and the confidence coefficient of the rate-gap allowance."""
    model_config = ConfigDict(frozen=True)

    N_mu: float = Field(ge=1)
    N_mup: float = Field(ge=1)
    N_0: float = Field(ge=1)
    coefficient: float = Field(default_factory=lambda: settings.confidence_coefficient, gt=0)
    r0: float = Field(default_factory=lambda: settings.default_r0, ge=0, lt=1)


class EpsilonCaps(BaseModel):
    """Caps on |eps_x| (source A) and |eps'_x| (source A_mu') for x = 0, 1, c."""
    model_config = ConfigDict(frozen=True)

    eps0: float = EPSILON_CAP
    eps1: float = EPSILON_CAP
    epsc: float = EPSILON_CAP
    eps0p: float = EPSILON_CAP
    eps1p: float = EPSILON_CAP
    epscp: float = EPSILON_CAP

    @classmethod
    def uniform(cls, cap: float) -> "EpsilonCaps":
        return cls(eps0=cap, eps1=cap, epsc=cap, eps0p=cap, eps1p=cap, epscp=cap)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.eps0, self.eps1, self.epsc, self.eps0p, self.eps1p, self.epscp)


class EpsilonCorner(BaseModel):
    """One signed assignment of the six relative class-weight errors."""
    model_config = ConfigDict(frozen=True)

    eps0: float = Field(default=0.0, gt=-0.5, lt=0.5)
    eps1: float = Field(default=0.0, gt=-0.5, lt=0.5)
    epsc: float = Field(default=0.0, gt=-0.5, lt=0.5)
    eps0p: float = Field(default=0.0, gt=-0.5, lt=0.5)
    eps1p: float = Field(default=0.0, gt=-0.5, lt=0.5)
    epscp: float = Field(default=0.0, gt=-0.5, lt=0.5)

    @property
    def is_zero(self) -> bool:
        return not any((self.eps0, self.eps1, self.epsc, self.eps0p, self.eps1p, self.epscp))


class BoundResult(BaseModel):
    """A verified bound, clamped for reporting.

    delta equals c * sc_upper / S_mu, where c is the rho_c weight the method
    used (the perturbed weight for OPERATIONAL).
    """
    model_config = ConfigDict(frozen=True)

    method: BoundMethod
    mu: float
    mu_prime: float
    delta: float = Field(ge=0, le=1)
    delta_prime: Optional[float] = Field(default=None, ge=0, le=1)
    s1_lower: float = Field(ge=0)
    sc_upper: float = Field(ge=0)
    confidence_note: Optional[str] = None

    r1: float = 0.0
    rc: float = 0.0
    iterations: int = 0
    failed_closed: bool = False

    # OPERATIONAL only
    s1_ratio: Optional[float] = None
    worst_corner: Optional[EpsilonCorner] = None

    @model_validator(mode="after")
    def _note_for_finite_methods(self):
        if self.method in (BoundMethod.FLUCTUATION, BoundMethod.OPERATIONAL) and not self.confidence_note:
            raise ValueError(f"{self.method.value} results carry a confidence note")
        return self
