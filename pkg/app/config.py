from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    app_name: str = "decoy-verify"

    # Logging
    log_level: str = "INFO"
    log_format: str = "[%(levelname)s] %(name)s: %(message)s"

    # Photon-number truncation
    poisson_tail: float = Field(default=1e-15, gt=0)
    weight_tolerance: float = Field(default=1e-12, gt=0)

    # Fluctuation solver
    confidence_coefficient: float = Field(default=10.0, gt=0)
    default_r0: float = Field(default=0.0, ge=0)
    fixed_point_tolerance: float = Field(default=1e-6, gt=0)
    max_iterations: int = Field(default=200, ge=1)

    # Soundness campaign
    campaign_trials: int = Field(default=200, ge=1)
    campaign_min_pulses: float = 1e7
    campaign_max_pulses: float = 1e8
    campaign_vacuum_fraction: float = 0.4
    campaign_max_s0: float = 1e-5

    # Simulation
    max_pulses: int = 2**63 - 1

    model_config = SettingsConfigDict(case_sensitive=False, frozen=True)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # Runs are reproducible from config + flags alone; the environment is ignored.
        return (init_settings,)


settings = Settings()
