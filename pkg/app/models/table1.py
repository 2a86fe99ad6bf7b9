"""Published reference values for the four benchmark intensity columns.

Values are percentages. The first block is for source A (intensity mu), the
second block for source A_mu'.
"""
from pydantic import BaseModel, ConfigDict

DARK_COUNT = 1e-6
VACUUM_PULSES = 4e9
HWANG_DECOY = 1.0


class BenchmarkColumn(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: float
    mu_prime_w1: float
    mu_prime_w2: float

    hwang: float
    true_fraction: float
    w1: float
    w2: float

    hwang_prime: float
    true_fraction_prime: float
    w2_prime: float


class BenchmarkBlock(BaseModel):
    """Channel and pulse numbers behind one family of bound rows."""
    model_config = ConfigDict(frozen=True)

    eta: float
    pulses: float


W1_SETUP = BenchmarkBlock(eta=1e-3, pulses=1e10)
W2_SETUP = BenchmarkBlock(eta=1e-4, pulses=8e10)

COLUMNS: tuple[BenchmarkColumn, ...] = (
    BenchmarkColumn(
        mu=0.2, mu_prime_w1=0.34, mu_prime_w2=0.39,
        hwang=44.5, true_fraction=18.3, w1=23.4, w2=25.6,
        hwang_prime=71.8, true_fraction_prime=32.3, w2_prime=40.1,
    ),
    BenchmarkColumn(
        mu=0.25, mu_prime_w1=0.38, mu_prime_w2=0.41,
        hwang=52.9, true_fraction=22.2, w1=28.9, w2=30.9,
        hwang_prime=74.0, true_fraction_prime=33.7, w2_prime=42.2,
    ),
    BenchmarkColumn(
        mu=0.3, mu_prime_w1=0.43, mu_prime_w2=0.45,
        hwang=60.4, true_fraction=25.9, w1=34.4, w2=36.2,
        hwang_prime=78.0, true_fraction_prime=36.2, w2_prime=45.8,
    ),
    BenchmarkColumn(
        mu=0.35, mu_prime_w1=0.45, mu_prime_w2=0.47,
        hwang=67.0, true_fraction=29.5, w1=39.9, w2=41.5,
        hwang_prime=79.8, true_fraction_prime=37.5, w2_prime=48.6,
    ),
)


def intensity_pairs() -> list[tuple[float, float]]:
    """Every (mu, mu') pair that appears in the benchmark."""
    pairs = []
    for column in COLUMNS:
        pairs.append((column.mu, column.mu_prime_w1))
        pairs.append((column.mu, column.mu_prime_w2))
    return pairs
