"""Poisson photon statistics of phase-randomized coherent pulses.

The bounds never look at individual photon numbers beyond the split
vacuum / single / multi-photon (rho_c) and, for the mu' source, the
residual rho_d left after matching rho_c to the mu source.
"""
import logging
import math

import numpy as np
from scipy.special import gammainc
from scipy.stats import poisson

from app.config import settings
from app.exceptions import InvalidPair
from app.models.source import (
    ClassEpsilon,
    IntensityErrorDistribution,
    ResidualDecomposition,
    SourceDecomposition,
)
from app.models.bounds import EpsilonCaps

logger = logging.getLogger(__name__)


class PhotonSourceService:
    @staticmethod
    def poisson_pmf(mu: float, n: int) -> float:
        if n < 0:
            return 0.0
        if mu == 0:
            return 1.0 if n == 0 else 0.0
        return float(poisson.pmf(n, mu))

    @staticmethod
    def tail_cutoff(mu: float) -> int:
        """Smallest n_max with P(n > n_max) below the tail tolerance (at least 2)."""
        if mu == 0:
            return 2
        n_max = int(poisson.isf(settings.poisson_tail, mu))
        while poisson.sf(n_max, mu) >= settings.poisson_tail:
            n_max += 1
        return max(n_max, 2)

    @staticmethod
    def pmf_vector(mu: float, n_max: int | None = None) -> np.ndarray:
        """P_mu(n) for n = 0..n_max."""
        if n_max is None:
            n_max = PhotonSourceService.tail_cutoff(mu)
        n = np.arange(n_max + 1)
        if mu == 0:
            return (n == 0).astype(float)
        return poisson.pmf(n, mu)

    @staticmethod
    def multi_photon_weight(mu: float) -> float:
        """c = 1 - e^-mu - mu e^-mu, computed as a Poisson tail to keep small mu accurate."""
        if mu == 0:
            return 0.0
        return float(poisson.sf(1, mu))

    @staticmethod
    def decompose(mu: float) -> SourceDecomposition:
        if mu == 0:
            return SourceDecomposition(mu=0.0, p0=1.0, p1=0.0, c=0.0)
        p0 = math.exp(-mu)
        return SourceDecomposition(
            mu=mu, p0=p0, p1=mu * p0, c=PhotonSourceService.multi_photon_weight(mu)
        )

    @staticmethod
    def validate_pair(mu: float, mup: float) -> bool:
        if not (math.isfinite(mu) and math.isfinite(mup)):
            return False
        return mup > mu > 0 and mup * math.exp(-mup) > mu * math.exp(-mu)

    @staticmethod
    def rho_c_scale(mu: float, mup: float) -> float:
        """mu'^2 e^-mu' / (mu^2 e^-mu): how much more rho_c the mu' source holds."""
        return (mup / mu) ** 2 * math.exp(mu - mup)

    @staticmethod
    def residual_decompose(mu: float, mup: float) -> ResidualDecomposition:
        if not PhotonSourceService.validate_pair(mu, mup):
            raise InvalidPair(f"need mu' > mu > 0 and mu' e^-mu' > mu e^-mu, got mu={mu}, mu'={mup}")

        c = PhotonSourceService.multi_photon_weight(mu)
        c_coeff = c * PhotonSourceService.rho_c_scale(mu, mup)
        p0p = math.exp(-mup)
        p1p = mup * p0p
        d = PhotonSourceService.multi_photon_weight(mup) - c_coeff

        if d < -settings.weight_tolerance:
            raise InvalidPair(f"residual weight d = {d:.3e} is negative for mu={mu}, mu'={mup}")
        return ResidualDecomposition(
            mu=mu, mu_prime=mup, p0p=p0p, p1p=p1p, c_coeff=c_coeff, d=max(d, 0.0)
        )

    @staticmethod
    def class_weights(mu: float) -> tuple[float, float, float]:
        dec = PhotonSourceService.decompose(mu)
        return dec.p0, dec.p1, dec.c

    @staticmethod
    def epsilon_bounds(mu: float, beta: float) -> ClassEpsilon:
        """Per-class |eps| caps implied by a device tolerance |mu_i - mu| <= beta * mu.

        Each class ratio P_x(mu(1 +- beta)) / P_x(mu) is monotone on either side
        of mu, so the two endpoints bound it.
        """
        if not 0 <= beta < 1:
            raise ValueError(f"beta must lie in [0, 1), got {beta}")
        if beta == 0 or mu == 0:
            return ClassEpsilon()

        base = PhotonSourceService.class_weights(mu)
        worst = [0.0, 0.0, 0.0]
        for endpoint in (mu * (1 - beta), mu * (1 + beta)):
            for i, weight in enumerate(PhotonSourceService.class_weights(endpoint)):
                worst[i] = max(worst[i], abs(weight / base[i] - 1.0))
        return ClassEpsilon(eps0=worst[0], eps1=worst[1], epsc=worst[2])

    @staticmethod
    def population_epsilon(mu: float, pulses: float, coefficient: float | None = None) -> ClassEpsilon:
        """Relative fluctuation of the realized class populations of a finite source."""
        if coefficient is None:
            coefficient = settings.confidence_coefficient
        if mu == 0:
            return ClassEpsilon()
        p0, p1, c = PhotonSourceService.class_weights(mu)
        return ClassEpsilon(
            eps0=coefficient * math.sqrt(1.0 / (pulses * p0)),
            eps1=coefficient * math.sqrt(1.0 / (pulses * p1)),
            epsc=coefficient * math.sqrt(1.0 / (pulses * c)),
        )

    @staticmethod
    def combined_epsilon_caps(
        mu: float,
        mup: float,
        beta: float,
        N_mu: float | None = None,
        N_mup: float | None = None,
        coefficient: float | None = None,
    ) -> EpsilonCaps:
        """Intensity-error caps, plus population caps when pulse counts are given."""
        signal = PhotonSourceService.epsilon_bounds(mu, beta)
        decoy = PhotonSourceService.epsilon_bounds(mup, beta)
        if N_mu is not None:
            signal = signal + PhotonSourceService.population_epsilon(mu, N_mu, coefficient)
        if N_mup is not None:
            decoy = decoy + PhotonSourceService.population_epsilon(mup, N_mup, coefficient)

        caps = EpsilonCaps(
            eps0=signal.eps0, eps1=signal.eps1, epsc=signal.epsc,
            eps0p=decoy.eps0, eps1p=decoy.eps1, epscp=decoy.epsc,
        )
        logger.debug("epsilon caps for mu=%s mu'=%s beta=%s: %s", mu, mup, beta, caps.as_tuple())
        return caps

    @staticmethod
    def mixed_pmf_vector(
        mu: float,
        beta: float,
        distribution: IntensityErrorDistribution = IntensityErrorDistribution.UNIFORM,
        n_max: int | None = None,
    ) -> np.ndarray:
        """Photon-number law of a pulse whose intensity is redrawn per pulse.

        UNIFORM draws mu_i on [mu(1-beta), mu(1+beta)]; ENDPOINTS picks either
        end with probability 1/2.
        """
        if n_max is None:
            n_max = PhotonSourceService.tail_cutoff(mu * (1 + beta))
        if beta == 0 or mu == 0:
            return PhotonSourceService.pmf_vector(mu, n_max)

        lo, hi = mu * (1 - beta), mu * (1 + beta)
        if distribution == IntensityErrorDistribution.ENDPOINTS:
            return 0.5 * (
                PhotonSourceService.pmf_vector(lo, n_max) + PhotonSourceService.pmf_vector(hi, n_max)
            )

        # (1/(hi-lo)) * integral of x^n e^-x / n! dx = [P(n+1, hi) - P(n+1, lo)] / (hi - lo)
        n = np.arange(n_max + 1)
        return (gammainc(n + 1, hi) - gammainc(n + 1, lo)) / (hi - lo)
