import sys

from app.models.run_config import RunConfig
from app.models.simulation import CampaignTrial
from app.services.montecarlo_service import MonteCarloService

FIELDS = list(CampaignTrial.model_fields)


def run(config: RunConfig) -> tuple[list[str], list[CampaignTrial]]:
    spec = config.campaign
    # --seed (or run.seed) wins over campaign.seed whenever it is given
    if config.run.seed is not None:
        spec = spec.model_copy(update={"seed": config.run.seed})
    summary = MonteCarloService.run_campaign(spec, workers=config.run.workers)
    print(
        f"{summary.sound}/{len(summary.trials)} sound, {summary.unsound} unsound, {summary.rejected} rejected",
        file=sys.stderr,
    )
    return FIELDS, summary.trials
