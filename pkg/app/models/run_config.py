"""Run configuration read from the JSON file given with --config."""
import json
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from pydantic_settings import (
    BaseSettings,
    JsonConfigSettingsSource,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from app.config import settings
from app.exceptions import ConfigError
from app.models.bounds import BoundMethod, EpsilonCaps, FluctuationParams
from app.models.channel import ChannelModel, ObservedRates
from app.models.report import OutputFormat
from app.models.simulation import CampaignSpec, IntensityError, SessionConfig
from app.models.source import Intensity, IntensityErrorDistribution, Probability
from app.services.channel_service import ChannelService
from app.services.photon_source import PhotonSourceService


class RunMode(str, Enum):
    BOUND = "bound"
    SIMULATE = "simulate"
    TABLE1 = "table1"
    KEYRATE = "keyrate"
    CAMPAIGN = "campaign"


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SourceSection(Section):
    mu: Intensity
    mu_prime: Intensity
    N_mu: Optional[int] = Field(default=None, ge=1)
    N_mup: Optional[int] = Field(default=None, ge=1)
    N_0: Optional[int] = Field(default=None, ge=1)
    beta: float = Field(default=0.0, ge=0, lt=1)
    distribution: IntensityErrorDistribution = IntensityErrorDistribution.UNIFORM

    @property
    def has_counts(self) -> bool:
        return None not in (self.N_mu, self.N_mup, self.N_0)

    @property
    def intensity_error(self) -> Optional[IntensityError]:
        if self.beta == 0:
            return None
        return IntensityError(beta=self.beta, distribution=self.distribution)


class ChannelSection(Section):
    """Either a uniform eta or an explicit per-photon-number map."""

    eta: Optional[Probability] = None
    eta_per_fock: Optional[dict[int, Probability]] = None
    s0: float = Field(default=0.0, ge=0, lt=1)
    fill: Optional[Probability] = None

    @model_validator(mode="after")
    def _one_description(self):
        if (self.eta is None) == (self.eta_per_fock is None):
            raise ValueError("give exactly one of eta or eta_per_fock")
        return self

    def to_model(self) -> ChannelModel:
        if self.eta is not None:
            return ChannelModel.uniform(self.eta, self.s0)
        return ChannelModel(eta_per_fock=self.eta_per_fock, s0=self.s0, fill=self.fill)


class RatesSection(Section):
    """Observed rates, given directly or as raw counts."""

    S0: Optional[Probability] = None
    S_mu: Optional[Probability] = None
    S_mup: Optional[Probability] = None
    n_0: Optional[int] = Field(default=None, ge=0)
    n_mu: Optional[int] = Field(default=None, ge=0)
    n_mup: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _rates_or_counts(self):
        rates = (self.S0, self.S_mu, self.S_mup)
        counts = (self.n_0, self.n_mu, self.n_mup)
        if None in rates and None in counts:
            raise ValueError("give S0, S_mu, S_mup or all three click counts n_0, n_mu, n_mup")
        return self

    @property
    def has_counts(self) -> bool:
        return None not in (self.n_0, self.n_mu, self.n_mup)

    def to_model(self, source: SourceSection) -> ObservedRates:
        if self.has_counts:
            return ObservedRates.from_counts(
                n_0=self.n_0, N_0=source.N_0, n_mu=self.n_mu, N_mu=source.N_mu,
                n_mup=self.n_mup, N_mup=source.N_mup,
            )
        return ObservedRates(S0=self.S0, S_mu=self.S_mu, S_mup=self.S_mup)


class FluctuationSection(Section):
    coefficient: float = Field(default_factory=lambda: settings.confidence_coefficient, gt=0)
    r0: float = Field(default_factory=lambda: settings.default_r0, ge=0, lt=1)


class EpsilonSection(Section):
    """A single cap for all six class errors, explicit caps, or caps derived from beta."""

    cap: Optional[float] = Field(default=None, ge=0, lt=0.5)
    caps: Optional[EpsilonCaps] = None
    from_intensity_error: bool = False
    include_population: bool = False

    def to_model(self, source: SourceSection, coefficient: float) -> EpsilonCaps:
        if self.caps is not None:
            return self.caps
        if self.cap is not None:
            return EpsilonCaps.uniform(self.cap)
        if self.from_intensity_error:
            counts = (source.N_mu, source.N_mup) if self.include_population else (None, None)
            return PhotonSourceService.combined_epsilon_caps(
                source.mu, source.mu_prime, source.beta, *counts, coefficient=coefficient
            )
        return EpsilonCaps()


class KeyRateSection(Section):
    t_b: float = Field(ge=0, le=0.5)
    t_p: float = Field(ge=0, le=0.5)
    n_r: int = Field(default=1, ge=0)
    delta: Optional[float] = Field(default=None, ge=0, le=1)


class RunSection(Section):
    methods: list[BoundMethod] = Field(
        default_factory=lambda: [BoundMethod.HWANG, BoundMethod.ASYMPTOTIC_3, BoundMethod.FLUCTUATION],
        min_length=1,
    )
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    format: OutputFormat = OutputFormat.CSV
    full_precision: bool = False
    out: Optional[Path] = None
    workers: int = Field(default=1, ge=1)


class RunConfig(BaseSettings):
    model_config = SettingsConfigDict(extra="forbid", frozen=True)

    mode: RunMode = RunMode.TABLE1
    source: Optional[SourceSection] = None
    channel: Optional[ChannelSection] = None
    rates: Optional[RatesSection] = None
    fluctuation: FluctuationSection = Field(default_factory=FluctuationSection)
    epsilon: EpsilonSection = Field(default_factory=EpsilonSection)
    keyrate: Optional[KeyRateSection] = None
    campaign: CampaignSpec = Field(default_factory=CampaignSpec)
    run: RunSection = Field(default_factory=RunSection)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @model_validator(mode="after")
    def _mode_requirements(self):
        needs_source = self.mode in (RunMode.BOUND, RunMode.SIMULATE) or (
            self.mode == RunMode.KEYRATE and self.keyrate is not None and self.keyrate.delta is None
        )
        if needs_source and self.source is None:
            raise ValueError(f"mode {self.mode.value} needs a source section")
        if self.mode == RunMode.SIMULATE:
            if self.channel is None:
                raise ValueError("mode simulate needs a channel section")
            if not self.source.has_counts:
                raise ValueError("mode simulate needs N_mu, N_mup and N_0 in the source section")
        if needs_source and self.mode != RunMode.SIMULATE:
            if self.rates is None and self.channel is None:
                raise ValueError(f"mode {self.mode.value} needs a rates or a channel section")
            if self.needs_fluctuation and not self.source.has_counts:
                raise ValueError("fluctuation and operational bounds need N_mu, N_mup and N_0")
            if self.rates is not None and self.rates.has_counts and not self.source.has_counts:
                raise ValueError("click counts need N_mu, N_mup and N_0 in the source section")
        if self.mode == RunMode.KEYRATE and self.keyrate is None:
            raise ValueError("mode keyrate needs a keyrate section")
        return self

    @property
    def needs_fluctuation(self) -> bool:
        return any(m in (BoundMethod.FLUCTUATION, BoundMethod.OPERATIONAL) for m in self.methods)

    @property
    def methods(self) -> list[BoundMethod]:
        return self.run.methods

    def observed_rates(self) -> ObservedRates:
        if self.rates is not None:
            return self.rates.to_model(self.source)
        return ChannelService.expected_rates(self.source.mu, self.source.mu_prime, self.channel.to_model())

    def fluctuation_params(self) -> Optional[FluctuationParams]:
        if self.source is None or not self.source.has_counts:
            return None
        return FluctuationParams(
            N_mu=self.source.N_mu, N_mup=self.source.N_mup, N_0=self.source.N_0,
            coefficient=self.fluctuation.coefficient, r0=self.fluctuation.r0,
        )

    def epsilon_caps(self) -> EpsilonCaps:
        return self.epsilon.to_model(self.source, self.fluctuation.coefficient)

    def session(self) -> SessionConfig:
        return SessionConfig.standard(
            self.source.mu, self.source.mu_prime, self.channel.to_model(),
            N_mu=self.source.N_mu, N_mup=self.source.N_mup, N_0=self.source.N_0,
            seed=self.run.seed or 0, intensity_error=self.source.intensity_error,
        )


def _field_paths(exc: ValidationError) -> list[str]:
    return [f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors()]


def load_run_config(path: Optional[Path] = None, overrides: Optional[dict[str, Any]] = None) -> RunConfig:
    """Read the JSON config, apply command-line overrides and validate everything up front."""
    data: dict[str, Any] = {}
    if path is not None:
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}", [f"--config: {path} does not exist"])
        try:
            data = JsonConfigSettingsSource(RunConfig, json_file=path)()
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}", [f"--config: {exc}"]) from exc

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "mode":
            data["mode"] = value
        else:
            data.setdefault("run", {})[key] = value

    try:
        return RunConfig(**data)
    except ValidationError as exc:
        paths = _field_paths(exc)
        raise ConfigError("invalid run configuration:\n  " + "\n  ".join(paths), paths) from exc
