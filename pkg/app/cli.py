"""Command-line entry point.

Exit codes: 0 success, 1 bad configuration or intensity pair, 2 the
numerics refused (no solution, negative bound, zero rate, no data).
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from app.commands import COMMANDS
from app.config import settings
from app.exceptions import ConfigError, DecoyVerifyError
from app.logging_setup import configure_logging
from app.models.report import OutputFormat
from app.models.run_config import RunConfig, RunMode, load_run_config
from app.services.report_service import ReportService

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Verify upper bounds on the tagged-bit fraction of decoy-state QKD sessions.",
    )
    parser.add_argument("--config", type=Path, help="JSON run configuration")
    parser.add_argument("--mode", choices=[m.value for m in RunMode], help="overrides the config's mode")
    parser.add_argument("--seed", type=int, help="64-bit seed for simulate and campaign")
    parser.add_argument("--out", type=Path, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], help="csv (default) or table")
    parser.add_argument("--full-precision", action="store_true", default=None, help="print floats with 17 significant digits")
    parser.add_argument("--workers", type=int, help="threads for simulate and campaign")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="warnings and errors only")
    return parser


def _emit(config: RunConfig, fields, rows) -> None:
    options = dict(fmt=config.run.format, full_precision=config.run.full_precision)
    if config.run.out is None:
        ReportService.write(rows, fields, sys.stdout, **options)
        return
    with open(config.run.out, "w", newline="") as stream:
        ReportService.write(rows, fields, stream, **options)
    logger.info("wrote %d rows to %s", len(rows), config.run.out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        configure_logging(logging.DEBUG)
    elif args.quiet:
        configure_logging(logging.WARNING)
    else:
        configure_logging()

    try:
        config = load_run_config(args.config, {
            "mode": args.mode,
            "seed": args.seed,
            "out": args.out,
            "format": args.format,
            "full_precision": args.full_precision,
            "workers": args.workers,
        })
        logger.info("mode %s", config.mode.value)
        fields, rows = COMMANDS[config.mode](config)
        _emit(config, fields, rows)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValidationError as exc:
        for error in exc.errors():
            path = ".".join(str(p) for p in error["loc"]) or "<root>"
            print(f"error: {path}: {error['msg']}", file=sys.stderr)
        return 1
    except DecoyVerifyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0
