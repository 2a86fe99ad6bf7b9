"""Ground-truth session simulator and soundness checks.

Pulses are never sampled one by one: each source's pulses are split into
photon-number classes with one multinomial draw, then each class clicks
binomially. Every draw has its own Philox stream keyed by
(seed, source index, class index), so results do not depend on scheduling.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from app.config import settings
from app.exceptions import CountOverflow, NegativeBound, NoData, NoSolution, ZeroRate
from app.models.bounds import BoundMethod, EpsilonCaps, FluctuationParams
from app.models.channel import ChannelModel
from app.models.simulation import (
    CampaignSpec,
    CampaignSummary,
    CampaignTrial,
    SessionConfig,
    SimulationOutcome,
    SourceOutcome,
    SourceSpec,
    TrialOutcome,
    TrialStatus,
)
from app.models.table1 import intensity_pairs
from app.services.bound_service import BoundService
from app.services.channel_service import ChannelService
from app.services.photon_source import PhotonSourceService

logger = logging.getLogger(__name__)


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def _map(fn, items, workers: int) -> list:
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


class MonteCarloService:
    @staticmethod
    def photon_law(mu: float, config: SessionConfig) -> np.ndarray:
        """Normalized photon-number probabilities a source draws its pulses from."""
        error = config.intensity_error
        if error is None or mu == 0:
            law = PhotonSourceService.pmf_vector(mu)
        else:
            law = PhotonSourceService.mixed_pmf_vector(mu, error.beta, error.distribution)
        law = np.clip(law, 0.0, None)
        return law / law.sum()

    @staticmethod
    def simulate_source(index: int, source: SourceSpec, config: SessionConfig) -> SourceOutcome:
        if source.pulses > settings.max_pulses:
            raise CountOverflow(f"source {index}: {source.pulses} pulses exceed the sampler's range")

        law = MonteCarloService.photon_law(source.mu, config)
        class_counts = _stream(config.seed, index, 0).multinomial(source.pulses, law)
        click_p = ChannelService.click_vector(config.channel, len(law) - 1)

        clicks = np.zeros_like(class_counts)
        for k, count in enumerate(class_counts):
            if count:
                clicks[k] = _stream(config.seed, index, k + 1).binomial(int(count), click_p[k])

        outcome = SourceOutcome(
            mu=source.mu,
            pulses=source.pulses,
            clicks=int(clicks.sum()),
            tagged_clicks=int(clicks[2:].sum()),
            single_clicks=int(clicks[1]),
            vacuum_clicks=int(clicks[0]),
            class_counts=[int(c) for c in class_counts],
        )
        logger.debug("source %d mu=%s: %d clicks of %d pulses", index, source.mu, outcome.clicks, source.pulses)
        return outcome

    @staticmethod
    def simulate(config: SessionConfig, workers: int = 1) -> SimulationOutcome:
        outcomes = _map(
            lambda item: MonteCarloService.simulate_source(item[0], item[1], config),
            list(enumerate(config.sources)),
            workers,
        )
        return SimulationOutcome(seed=config.seed, sources=outcomes)

    @staticmethod
    def soundness_trial(
        config: SessionConfig,
        bound_method: BoundMethod = BoundMethod.FLUCTUATION,
        params: Optional[FluctuationParams] = None,
        eps_caps: Optional[EpsilonCaps] = None,
        coefficient: Optional[float] = None,
    ) -> TrialOutcome:
        outcome = MonteCarloService.simulate(config)
        signal, decoy = outcome.signal_and_decoy()
        if signal.clicks == 0:
            raise NoData(f"source mu={signal.mu} produced no clicks")

        if params is None and bound_method in (BoundMethod.FLUCTUATION, BoundMethod.OPERATIONAL):
            extra = {} if coefficient is None else {"coefficient": coefficient}
            params = FluctuationParams(
                N_mu=signal.pulses, N_mup=decoy.pulses, N_0=outcome.vacuum().pulses, **extra
            )

        result = BoundService.compute(
            bound_method, signal.mu, decoy.mu, outcome.observed_rates(), params, eps_caps
        )
        true_delta = signal.true_delta
        return TrialOutcome(
            method=bound_method,
            verified_delta=result.delta,
            true_delta=true_delta,
            sound=result.delta >= true_delta,
        )

    @staticmethod
    def random_adversarial_channel(
        rng: np.random.Generator,
        log_eta_range: tuple[float, float] = (-3.5, 0.0),
        fock_span: int = 8,
        max_s0: float = settings.campaign_max_s0,
    ) -> ChannelModel:
        """Independent log-uniform eta_n for n = 1..fock_span; higher n reuse the last one."""
        low, high = log_eta_range
        etas = 10.0 ** rng.uniform(low, high, size=fock_span)
        return ChannelModel(
            eta_per_fock={n + 1: float(eta) for n, eta in enumerate(etas)},
            s0=float(rng.uniform(0.0, max_s0)),
        )

    @staticmethod
    def _campaign_trial(index: int, spec: CampaignSpec) -> CampaignTrial:
        rng = _stream(spec.seed, index)
        channel = MonteCarloService.random_adversarial_channel(
            rng, spec.log_eta_range, spec.fock_span, spec.max_s0
        )
        pairs = intensity_pairs()
        mu, mup = pairs[int(rng.integers(len(pairs)))]
        pulses = int(10 ** rng.uniform(np.log10(spec.min_pulses), np.log10(spec.max_pulses)))
        session_seed = int(rng.integers(0, 2**63))

        config = SessionConfig.standard(
            mu, mup, channel,
            N_mu=pulses, N_mup=pulses, N_0=max(1, int(spec.vacuum_fraction * pulses)),
            seed=session_seed,
        )
        row = dict(index=index, seed=session_seed, mu=mu, mu_prime=mup, pulses=pulses, s0=channel.s0)
        try:
            trial = MonteCarloService.soundness_trial(config, spec.method, coefficient=spec.coefficient)
        except (NoSolution, NegativeBound, ZeroRate, NoData) as exc:
            logger.warning("trial %d rejected: %s", index, exc)
            return CampaignTrial(status=TrialStatus.REJECTED, reason=str(exc), **row)

        status = TrialStatus.SOUND if trial.sound else TrialStatus.UNSOUND
        if not trial.sound:
            logger.warning(
                "trial %d unsound: verified %.6f < true %.6f", index, trial.verified_delta, trial.true_delta
            )
        logger.debug("trial %d: %s verified=%.6f true=%.6f", index, status.value, trial.verified_delta, trial.true_delta)
        return CampaignTrial(
            status=status, verified_delta=trial.verified_delta, true_delta=trial.true_delta, **row
        )

    @staticmethod
    def run_campaign(spec: CampaignSpec, workers: int = 1) -> CampaignSummary:
        logger.info("running %d soundness trials with %s bounds", spec.trials, spec.method.value)
        trials = _map(
            lambda i: MonteCarloService._campaign_trial(i, spec), range(spec.trials), workers
        )
        summary = CampaignSummary(method=spec.method, trials=trials)
        logger.info(
            "campaign done: %d sound, %d unsound, %d rejected",
            summary.sound, summary.unsound, summary.rejected,
        )
        return summary
