import logging
import math

import numpy as np
from scipy.special import entr

from app.models.bounds import BoundResult
from app.models.keyrate import DistillationCosts, DistillationInput, SourceKeyFractions

logger = logging.getLogger(__name__)


class KeyRateService:
    @staticmethod
    def binary_entropy(t: float) -> float:
        if not 0 <= t <= 1:
            raise ValueError(f"t must lie in [0, 1], got {t}")
        return float((entr(t) + entr(1 - t)) / np.log(2))

    @staticmethod
    def _phase_error_ratio(data: DistillationInput) -> float:
        if data.delta >= 1:
            return math.inf
        return data.t_p / (1 - data.delta)

    @staticmethod
    def distillation_costs(data: DistillationInput) -> DistillationCosts:
        ec_bits = data.n_r * KeyRateService.binary_entropy(data.t_b)

        ratio = KeyRateService._phase_error_ratio(data)
        if ratio > 0.5:
            logger.debug("t_p/(1-delta)=%s exceeds 1/2; privacy amplification takes every bit", ratio)
            pa_bits = float(data.n_r)
        else:
            pa_bits = data.n_r * (data.delta + (1 - data.delta) * KeyRateService.binary_entropy(ratio))
        return DistillationCosts(ec_bits=ec_bits, pa_bits=pa_bits)

    @staticmethod
    def key_fraction(data: DistillationInput) -> float:
        """Net secret bits per raw bit, floored at 0."""
        ratio = KeyRateService._phase_error_ratio(data)
        if ratio > 0.5:
            return 0.0
        value = (
            1
            - KeyRateService.binary_entropy(data.t_b)
            - data.delta
            - (1 - data.delta) * KeyRateService.binary_entropy(ratio)
        )
        return min(max(value, 0.0), 1.0)

    @staticmethod
    def key_bits(data: DistillationInput) -> float:
        return data.n_r * KeyRateService.key_fraction(data)

    @staticmethod
    def source_key_fractions(t_b: float, t_p: float, bound: BoundResult) -> SourceKeyFractions:
        """Key fraction of source A with Delta and of source A_mu' with Delta'."""
        signal = KeyRateService.key_fraction(DistillationInput(t_b=t_b, t_p=t_p, delta=bound.delta))
        decoy = None
        if bound.delta_prime is not None:
            decoy = KeyRateService.key_fraction(
                DistillationInput(t_b=t_b, t_p=t_p, delta=bound.delta_prime)
            )
        return SourceKeyFractions(signal=signal, decoy=decoy)
