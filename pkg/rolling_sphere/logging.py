import logging
import sys
from typing import IO, Optional

import click

SUCCESS = 25
logging.addLevelName(SUCCESS, "SUCCESS")

_STYLES = {
    "DEBUG": {"fg": "blue"},
    "INFO": {},
    "SUCCESS": {"fg": "green", "bold": True},
    "WARNING": {"fg": "yellow"},
    "ERROR": {"fg": "red"},
}


class ClickFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        if record.levelname == "INFO":
            return message

        prefix = click.style(f"{record.levelname}:", **_STYLES.get(record.levelname, {}))
        return f"{prefix} {message}"


class ClickHandler(logging.Handler):
    def __init__(self, stream: Optional[IO[str]] = None):
        super().__init__()
        self._stream = stream

    def emit(self, record: logging.LogRecord):
        try:
            click.echo(self.format(record), file=self._stream or sys.stderr)
        except Exception:
            self.handleError(record)


class RollingSphereLogger(logging.Logger):
    def success(self, message: str, *args, **kwargs):
        if self.isEnabledFor(SUCCESS):
            self._log(SUCCESS, message, args, **kwargs)

    def set_level(self, level: str):
        self.setLevel(level.upper())


def _get_logger(name: str) -> RollingSphereLogger:
    previous = logging.getLoggerClass()
    logging.setLoggerClass(RollingSphereLogger)
    try:
        _logger = logging.getLogger(name)
    finally:
        logging.setLoggerClass(previous)

    if not _logger.handlers:
        handler = ClickHandler()
        handler.setFormatter(ClickFormatter("%(message)s"))
        _logger.addHandler(handler)
        _logger.setLevel(logging.INFO)
        _logger.propagate = False

    return _logger  # type: ignore[return-value]


logger = _get_logger("rolling_sphere")

__all__ = ["logger", "SUCCESS"]
