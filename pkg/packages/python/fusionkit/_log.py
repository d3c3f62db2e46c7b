from __future__ import annotations
from typing import Optional
import logging
import os
import sys

from .constants import ENV_LOG_LEVEL
from .errors import PreconditionViolated

_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def resolve_level(explicit: Optional[str] = None) -> int:
    """--log-level, then FUSIONKIT_LOG_LEVEL, then WARNING."""
    name = explicit or os.environ.get(ENV_LOG_LEVEL) or "WARNING"
    name = name.strip().upper()
    if name not in _LEVELS:
        raise PreconditionViolated(f"unknown log level {name!r}")
    return getattr(logging, name)


def configure(level: Optional[str] = None) -> None:
    """Route the package loggers to stderr. Reports go to stdout separately."""
    root = logging.getLogger("fusionkit")
    for h in list(root.handlers):
        if getattr(h, "_fusionkit", False):
            root.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(_FORMAT))
    handler._fusionkit = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(resolve_level(level))
    root.propagate = False
