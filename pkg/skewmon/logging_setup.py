"""Logging configuration for command-line runs."""

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "WARNING") -> None:
    """Send skewmon logs to the current stderr at the given level."""
    root = logging.getLogger("skewmon")
    root.setLevel(level.upper())
    for handler in root.handlers:
        if getattr(handler, "_skewmon", False):
            handler.setStream(sys.stderr)
            return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._skewmon = True
    root.addHandler(handler)
