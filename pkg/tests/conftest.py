import numpy as np
import pytest

from app.models.bounds import FluctuationParams
from app.models.channel import ChannelModel
from app.models.table1 import DARK_COUNT, VACUUM_PULSES
from app.services.channel_service import ChannelService


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def honest_channel():
    return ChannelModel.uniform(1e-3, DARK_COUNT)


@pytest.fixture
def honest_rates():
    """Expected rates of an honest channel for a (mu, mu') pair."""
    def build(mu, mup, eta=1e-3, s0=DARK_COUNT):
        return ChannelService.expected_rates(mu, mup, ChannelModel.uniform(eta, s0))
    return build


@pytest.fixture
def benchmark_params():
    def build(pulses=1e10):
        return FluctuationParams(N_mu=pulses, N_mup=pulses, N_0=VACUUM_PULSES)
    return build

