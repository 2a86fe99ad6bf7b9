import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.source import Probability


class ChannelModel(BaseModel):
    """Channel plus detector seen as one click probability per photon number.

    A single uniform eta is the honest channel; any other map is an adversary
    that treats pulses differently only by photon number.
    """
    model_config = ConfigDict(frozen=True)

    eta_per_fock: dict[int, Probability] = Field(min_length=1)
    s0: float = Field(default=0.0, ge=0, lt=1)
    # Value for photon numbers missing from the map; defaults to the entry at the largest key.
    fill: Optional[Probability] = None

    @field_validator("eta_per_fock")
    @classmethod
    def _positive_photon_numbers(cls, value: dict[int, float]) -> dict[int, float]:
        if any(n < 1 for n in value):
            raise ValueError("eta_per_fock keys must be photon numbers >= 1")
        return value

    @classmethod
    def uniform(cls, eta: float, s0: float = 0.0) -> "ChannelModel":
        return cls(eta_per_fock={1: eta}, s0=s0)

    @property
    def fill_value(self) -> float:
        if self.fill is not None:
            return self.fill
        return self.eta_per_fock[max(self.eta_per_fock)]

    def eta(self, n: int) -> float:
        return self.eta_per_fock.get(n, self.fill_value)

    @property
    def nominal_eta(self) -> float:
        """Single-photon transmittance, the eta a report quotes for this channel."""
        return self.eta(1)


class ObservedRates(BaseModel):
    """Counting rates of the vacuum, mu and mu' sources; all a bound may see."""
    model_config = ConfigDict(frozen=True)

    S0: Probability
    S_mu: Probability
    S_mup: Probability

    n_0: Optional[int] = Field(default=None, ge=0)
    n_mu: Optional[int] = Field(default=None, ge=0)
    n_mup: Optional[int] = Field(default=None, ge=0)
    N_0: Optional[int] = Field(default=None, ge=1)
    N_mu: Optional[int] = Field(default=None, ge=1)
    N_mup: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _rates_match_counts(self):
        for rate, clicks, pulses, name in (
            (self.S0, self.n_0, self.N_0, "S0"),
            (self.S_mu, self.n_mu, self.N_mu, "S_mu"),
            (self.S_mup, self.n_mup, self.N_mup, "S_mup"),
        ):
            if clicks is None or pulses is None:
                continue
            if clicks > pulses:
                raise ValueError(f"{name}: more clicks than pulses")
            if not math.isclose(rate, clicks / pulses, rel_tol=1e-12, abs_tol=0.0):
                raise ValueError(f"{name} must equal clicks / pulses")
        return self

    @classmethod
    def from_counts(
        cls, n_0: int, N_0: int, n_mu: int, N_mu: int, n_mup: int, N_mup: int
    ) -> "ObservedRates":
        return cls(
            S0=n_0 / N_0, S_mu=n_mu / N_mu, S_mup=n_mup / N_mup,
            n_0=n_0, N_0=N_0, n_mu=n_mu, N_mu=N_mu, n_mup=n_mup, N_mup=N_mup,
        )

    @property
    def has_counts(self) -> bool:
        return None not in (self.n_0, self.n_mu, self.n_mup)
