import sys
import logging
from typing import Optional, TextIO


# Custom log level for summary lines (thresholds, coverage totals)
REPORT = 25
logging.addLevelName(REPORT, "REPORT")

# Levels printed without a "LEVEL: " prefix
_UNPREFIXED = frozenset((logging.INFO, REPORT))


class CrashingHandler(logging.StreamHandler):

    def emit(self, record):
        """Unlike the method it overrides, this will not catch exceptions"""
        self.stream.write(self.format(record) + self.terminator)
        self.flush()


class NiceFormatter(logging.Formatter):
    """
    Prefix the level name to all log messages except INFO and REPORT ones.
    """
    def format(self, record):
        text = super().format(record)
        if record.levelno in _UNPREFIXED:
            return text
        return f"{record.levelname}: {text}"


def setup_logging(logger: logging.Logger, stream: Optional[TextIO] = None, quiet: bool = False, debug: int = 0):
    """
    Attach a handler to the given logger. Log output goes to stderr unless a
    stream is given; standard output is reserved for command results.

    --debug wins over --quiet.
    """
    if debug > 0:
        level = logging.DEBUG
    elif quiet:
        level = logging.ERROR
    else:
        level = logging.INFO
    handler = CrashingHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(NiceFormatter())
    handler.setLevel(level)
    logger.setLevel(level)
    logger.addHandler(handler)
    return handler
