import logging

import numpy as np

from app.exceptions import ZeroRate
from app.models.channel import ChannelModel, ObservedRates
from app.services.photon_source import PhotonSourceService

logger = logging.getLogger(__name__)


class ChannelService:
    @staticmethod
    def click_probability(n: int, ch: ChannelModel) -> float:
        """Dark count OR any of the n photons getting through."""
        return float(ChannelService.click_vector(ch, max(n, 0))[n])

    @staticmethod
    def click_vector(ch: ChannelModel, n_max: int) -> np.ndarray:
        """1 - (1 - s0)(1 - eta_n)^n for n = 0..n_max, accurate when the result is tiny."""
        n = np.arange(n_max + 1)
        eta = np.array([ch.eta(int(k)) if k > 0 else 0.0 for k in n])
        with np.errstate(divide="ignore", invalid="ignore"):
            log_pass = np.where(eta < 1, n * np.log1p(-eta), -np.inf)
        # 1 - (1 - s0) e^x = -expm1(x) + s0 e^x
        return -np.expm1(log_pass) + ch.s0 * np.exp(log_pass)

    @staticmethod
    def _class_terms(mu: float, ch: ChannelModel) -> np.ndarray:
        pmf = PhotonSourceService.pmf_vector(mu)
        return pmf * ChannelService.click_vector(ch, len(pmf) - 1)

    @staticmethod
    def expected_rate(mu: float, ch: ChannelModel) -> float:
        if mu == 0:
            return ch.s0
        return float(np.sum(ChannelService._class_terms(mu, ch)))

    @staticmethod
    def expected_tagged_fraction(mu: float, ch: ChannelModel) -> float:
        terms = ChannelService._class_terms(mu, ch)
        rate = float(np.sum(terms))
        if rate <= 0:
            raise ZeroRate(f"no clicks expected from intensity {mu}")
        return float(np.sum(terms[2:])) / rate

    @staticmethod
    def expected_rates(mu: float, mup: float, ch: ChannelModel) -> ObservedRates:
        return ObservedRates(
            S0=ch.s0,
            S_mu=ChannelService.expected_rate(mu, ch),
            S_mup=ChannelService.expected_rate(mup, ch),
        )

    @staticmethod
    def normal_rates(mu: float, mup: float, scale: float = 1e-3) -> ObservedRates:
        """No eavesdropper and s0 << eta: S_mu' / S_mu = mu' / mu exactly."""
        return ObservedRates(S0=0.0, S_mu=scale * mu, S_mup=scale * mup)

    @staticmethod
    def extreme_pns(s0: float = 0.0) -> ChannelModel:
        """Only multi-photon pulses ever click."""
        return ChannelModel(eta_per_fock={1: 0.0, 2: 1.0}, s0=s0)
