"""One module per run mode; each returns (fields, rows) for the report writer."""
from app.commands import bound, campaign, keyrate, simulate, table1
from app.models.run_config import RunMode

COMMANDS = {
    RunMode.BOUND: bound.run,
    RunMode.SIMULATE: simulate.run,
    RunMode.TABLE1: table1.run,
    RunMode.KEYRATE: keyrate.run,
    RunMode.CAMPAIGN: campaign.run,
}

__all__ = ["COMMANDS"]
