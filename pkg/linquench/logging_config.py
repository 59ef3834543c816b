"""
Logging configuration for linquench

Records go to stderr (and optionally a file) so stdout carries only the
run summary. Nothing logged here ever reaches a report artifact.
"""

import logging
import sys
from typing import Optional

from pythonjsonlogger import jsonlogger

from .config import get_config

# Third-party loggers that flood DEBUG output during figure rendering.
QUIET_LOGGERS = ("matplotlib", "PIL")

TEXT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(command)s seed=%(seed)s] %(message)s"


class RunContextFilter(logging.Filter):
    """Stamps the running command and root seed on every record."""

    def __init__(self, command: Optional[str] = None, seed: Optional[int] = None):
        super().__init__()
        self.command = command or "-"
        self.seed = "-" if seed is None else seed

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, "command"):
            record.command = self.command
        if not hasattr(record, "seed"):
            record.seed = self.seed
        return True


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    """JSON lines with level, logger and run context fields."""

    def add_fields(self, log_record, record, message_dict):
        super().add_fields(log_record, record, message_dict)

        log_record["timestamp"] = record.created
        log_record["level"] = record.levelname
        log_record["logger"] = record.name
        for key in ("command", "seed"):
            value = getattr(record, key, None)
            if value is not None and value != "-":
                log_record[key] = value

        if record.exc_info:
            log_record["exception"] = self.formatException(record.exc_info)


def _resolve_level(name: str) -> int:
    level = logging.getLevelName(name.upper())
    return level if isinstance(level, int) else logging.INFO


def setup_logging(
    level: Optional[str] = None,
    format_type: Optional[str] = None,
    log_file: Optional[str] = None,
    command: Optional[str] = None,
    seed: Optional[int] = None,
) -> logging.Logger:
    """
    Configure the root logger.

    Arguments win over the global config's logging section. Existing root
    handlers are replaced, so calling this twice does not duplicate output.
    """
    settings = get_config().logging
    numeric_level = _resolve_level(level or settings.level)
    log_format = format_type or settings.format
    file_path = log_file or settings.file

    if log_format == "json":
        formatter = CustomJsonFormatter("%(timestamp)s %(level)s %(name)s %(message)s")
    else:
        formatter = logging.Formatter(TEXT_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    context = RunContextFilter(command, seed)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    handlers = [logging.StreamHandler(sys.stderr)]
    if file_path:
        handlers.append(logging.FileHandler(file_path))
    for handler in handlers:
        handler.setLevel(numeric_level)
        handler.setFormatter(formatter)
        handler.addFilter(context)
        root_logger.addHandler(handler)

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    return root_logger
