from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict


class OutputFormat(str, Enum):
    CSV = "csv"
    TABLE = "table"


class BoundRow(BaseModel):
    """One CSV row of the bound and benchmark reports."""
    model_config = ConfigDict(frozen=True)

    method: str
    mu: float
    mu_prime: Optional[float] = None
    eta: Optional[float] = None
    s0: Optional[float] = None
    N_mu: Optional[float] = None
    N_mup: Optional[float] = None
    N0: Optional[float] = None
    delta: Optional[float] = None
    delta_prime: Optional[float] = None
    s1_lower: Optional[float] = None
    sc_upper: Optional[float] = None
    paper_value: Optional[float] = None
    abs_dev: Optional[float] = None


class SourceRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: str
    mu: float
    pulses: int
    clicks: int
    tagged: int
    single: int
    vacuum: int
    rate: float
    true_delta: Optional[float] = None


class KeyRateRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: str
    t_b: float
    t_p: float
    delta: float
    n_r: int
    ec_bits: float
    pa_bits: float
    key_fraction: float
    key_bits: float
