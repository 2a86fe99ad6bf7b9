from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import settings
from app.exceptions import NoData
from app.models.bounds import BoundMethod
from app.models.channel import ChannelModel, ObservedRates
from app.models.source import Intensity, IntensityErrorDistribution

Seed = int


class SourceSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: Intensity
    pulses: int = Field(ge=1)


class IntensityError(BaseModel):
    """Per-pulse relative intensity error |mu_i - mu| <= beta * mu."""
    model_config = ConfigDict(frozen=True)

    beta: float = Field(ge=0, lt=1)
    distribution: IntensityErrorDistribution = IntensityErrorDistribution.UNIFORM


class SessionConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    sources: list[SourceSpec] = Field(min_length=1)
    channel: ChannelModel
    seed: Seed = Field(default=0, ge=0, lt=2**64)
    intensity_error: Optional[IntensityError] = None

    @model_validator(mode="after")
    def _one_vacuum_source(self):
        vacuum = [s for s in self.sources if s.mu == 0]
        if len(vacuum) != 1:
            raise ValueError("a session has exactly one vacuum source")
        return self

    @classmethod
    def standard(
        cls,
        mu: float,
        mu_prime: float,
        channel: ChannelModel,
        N_mu: int,
        N_mup: int,
        N_0: int,
        seed: Seed = 0,
        intensity_error: Optional[IntensityError] = None,
    ) -> "SessionConfig":
        return cls(
            sources=[
                SourceSpec(mu=0.0, pulses=N_0),
                SourceSpec(mu=mu, pulses=N_mu),
                SourceSpec(mu=mu_prime, pulses=N_mup),
            ],
            channel=channel,
            seed=seed,
            intensity_error=intensity_error,
        )


class SourceOutcome(BaseModel):
    """Click tallies of one source, split by the photon number actually emitted."""
    model_config = ConfigDict(frozen=True)

    mu: float
    pulses: int
    clicks: int
    tagged_clicks: int
    single_clicks: int
    vacuum_clicks: int
    class_counts: list[int]

    @model_validator(mode="after")
    def _tallies_add_up(self):
        if self.tagged_clicks + self.single_clicks + self.vacuum_clicks != self.clicks:
            raise ValueError("tagged + single + vacuum clicks must equal clicks")
        if sum(self.class_counts) != self.pulses:
            raise ValueError("photon-number classes must partition the pulses")
        return self

    @property
    def rate(self) -> float:
        return self.clicks / self.pulses

    @property
    def true_delta(self) -> Optional[float]:
        if self.clicks == 0:
            return None
        return self.tagged_clicks / self.clicks


class SimulationOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: Seed
    sources: list[SourceOutcome]

    def vacuum(self) -> SourceOutcome:
        return next(s for s in self.sources if s.mu == 0)

    def signal_and_decoy(self) -> tuple[SourceOutcome, SourceOutcome]:
        lit = sorted((s for s in self.sources if s.mu > 0), key=lambda s: s.mu)
        if len(lit) < 2:
            raise NoData("the session has fewer than two non-vacuum sources")
        return lit[0], lit[1]

    def observed_rates(self) -> ObservedRates:
        vacuum = self.vacuum()
        signal, decoy = self.signal_and_decoy()
        return ObservedRates.from_counts(
            n_0=vacuum.clicks, N_0=vacuum.pulses,
            n_mu=signal.clicks, N_mu=signal.pulses,
            n_mup=decoy.clicks, N_mup=decoy.pulses,
        )


class TrialStatus(str, Enum):
    SOUND = "sound"
    UNSOUND = "unsound"
    REJECTED = "rejected"


class TrialOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: BoundMethod
    verified_delta: float
    true_delta: float
    sound: bool


class CampaignTrial(BaseModel):
    """One row of a soundness campaign; verified_delta is None when the bound refused."""
    model_config = ConfigDict(frozen=True)

    index: int
    seed: Seed
    mu: float
    mu_prime: float
    pulses: int
    s0: float
    status: TrialStatus
    verified_delta: Optional[float] = None
    true_delta: Optional[float] = None
    reason: Optional[str] = None


class CampaignSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: BoundMethod
    trials: list[CampaignTrial]

    def count(self, status: TrialStatus) -> int:
        return sum(1 for t in self.trials if t.status == status)

    @property
    def sound(self) -> int:
        return self.count(TrialStatus.SOUND)

    @property
    def unsound(self) -> int:
        return self.count(TrialStatus.UNSOUND)

    @property
    def rejected(self) -> int:
        return self.count(TrialStatus.REJECTED)


class CampaignSpec(BaseModel):
    """Randomized adversarial soundness sweep."""
    model_config = ConfigDict(frozen=True)

    trials: int = Field(default_factory=lambda: settings.campaign_trials, ge=1)
    seed: Seed = Field(default=0, ge=0, lt=2**64)
    method: BoundMethod = BoundMethod.FLUCTUATION
    coefficient: float = Field(default_factory=lambda: settings.confidence_coefficient, gt=0)
    min_pulses: float = Field(default_factory=lambda: settings.campaign_min_pulses, ge=1)
    max_pulses: float = Field(default_factory=lambda: settings.campaign_max_pulses, ge=1)
    vacuum_fraction: float = Field(default_factory=lambda: settings.campaign_vacuum_fraction, gt=0)
    max_s0: float = Field(default_factory=lambda: settings.campaign_max_s0, ge=0, lt=1)
    # log10 range of the per-photon-number transmittances
    log_eta_range: tuple[float, float] = (-3.5, 0.0)
    fock_span: int = Field(default=8, ge=2)

    @model_validator(mode="after")
    def _ordered_ranges(self):
        if self.min_pulses > self.max_pulses:
            raise ValueError("min_pulses must not exceed max_pulses")
        if self.log_eta_range[0] > self.log_eta_range[1] or self.log_eta_range[1] > 0:
            raise ValueError("log_eta_range must be an ordered range ending at or below 0")
        return self
