import logging

from app.models.report import SourceRow
from app.models.run_config import RunConfig
from app.services.montecarlo_service import MonteCarloService

logger = logging.getLogger(__name__)

FIELDS = list(SourceRow.model_fields)


def _label(mu: float, signal: float) -> str:
    if mu == 0:
        return "vacuum"
    return "signal" if mu == signal else "decoy"


def run(config: RunConfig) -> tuple[list[str], list[SourceRow]]:
    session = config.session()
    outcome = MonteCarloService.simulate(session, workers=config.run.workers)
    logger.info("simulated seed %d over %d sources", outcome.seed, len(outcome.sources))
    rows = [
        SourceRow(
            source=_label(s.mu, config.source.mu),
            mu=s.mu,
            pulses=s.pulses,
            clicks=s.clicks,
            tagged=s.tagged_clicks,
            single=s.single_clicks,
            vacuum=s.vacuum_clicks,
            rate=s.rate,
            true_delta=s.true_delta,
        )
        for s in outcome.sources
    ]
    return FIELDS, rows
