import logging

from app.models.bounds import BoundMethod, BoundResult
from app.models.report import BoundRow
from app.models.run_config import RunConfig
from app.services.bound_service import BoundService
from app.services.report_service import BOUND_FIELDS, ReportService

logger = logging.getLogger(__name__)


def compute_results(config: RunConfig) -> list[BoundResult]:
    source = config.source
    rates = config.observed_rates()
    params = config.fluctuation_params()
    caps = config.epsilon_caps() if BoundMethod.OPERATIONAL in config.methods else None

    results = []
    for method in config.methods:
        result = BoundService.compute(method, source.mu, source.mu_prime, rates, params, caps)
        logger.info("%s: delta=%.6f", method.value, result.delta)
        if result.confidence_note:
            logger.info("%s: %s", method.value, result.confidence_note)
        results.append(result)
    return results


def run(config: RunConfig) -> tuple[list[str], list[BoundRow]]:
    rates = config.observed_rates()
    channel = config.channel.to_model() if config.channel else None
    params = config.fluctuation_params()
    rows = [
        ReportService.bound_row(result, rates, channel, params)
        for result in compute_results(config)
    ]
    return BOUND_FIELDS, rows
