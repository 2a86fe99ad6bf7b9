import logging
import sys

from app.config import settings


def configure_logging(level: str | int | None = None) -> None:
    """Send all toolkit logs to stderr; stdout stays reserved for reports."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(settings.log_format))

    root = logging.getLogger("app")
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(level if level is not None else settings.log_level)
    root.propagate = False
