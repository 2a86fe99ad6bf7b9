from pydantic import BaseModel, ConfigDict, Field


class DistillationInput(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_b: float = Field(ge=0, le=0.5)
    t_p: float = Field(ge=0, le=0.5)
    delta: float = Field(ge=0, le=1)
    n_r: int = Field(default=1, ge=0)


class DistillationCosts(BaseModel):
    """Raw bits consumed by error correction and by privacy amplification."""
    model_config = ConfigDict(frozen=True)

    ec_bits: float = Field(ge=0)
    pa_bits: float = Field(ge=0)


class SourceKeyFractions(BaseModel):
    model_config = ConfigDict(frozen=True)

    signal: float = Field(ge=0, le=1)
    decoy: float | None = Field(default=None, ge=0, le=1)
