"""Console logging: `[module] message` on stderr, stdout stays for results."""

import logging
import sys

ROOT_LOGGER = "hwtheta"


class _TagFormatter(logging.Formatter):
    def format(self, record):
        record.tag = record.name.rsplit(".", 1)[-1]
        return super().format(record)


def setup_logging(level="WARNING", stream=None) -> logging.Logger:
    """Configure the package logger once; later calls change the level and, if given, the stream."""
    logger = logging.getLogger(ROOT_LOGGER)
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logger.setLevel(level)
    handler = next((h for h in logger.handlers if isinstance(h.formatter, _TagFormatter)), None)
    if handler is None:
        handler = logging.StreamHandler(stream or sys.stderr)
        handler.setFormatter(_TagFormatter("[%(tag)s] %(message)s"))
        logger.addHandler(handler)
        logger.propagate = False
    elif stream is not None:
        handler.setStream(stream)
    return logger


def verbosity_level(verbose: int, default: str = "WARNING") -> str:
    if verbose >= 2:
        return "DEBUG"
    if verbose == 1:
        return "INFO"
    return default
