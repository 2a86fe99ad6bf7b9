from app.models.report import BoundRow
from app.models.run_config import RunConfig
from app.services.report_service import BOUND_FIELDS, ReportService


def run(config: RunConfig) -> tuple[list[str], list[BoundRow]]:
    return BOUND_FIELDS, ReportService.run_table1()
