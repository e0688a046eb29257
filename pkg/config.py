import logging
import os
import sys
from pathlib import Path
from typing import Optional

from constants import TIE_RTOL, PR_TOL

__all__ = [
    'get_eig_cache_dir',
    'get_dense_limit',
    'get_log_level',
    'get_logger',
    'set_log_level',
    'TIE_RTOL', 'PR_TOL',
]

DEFAULT_DENSE_LIMIT = 4096

_LOGGERS = {}


def get_eig_cache_dir() -> Optional[Path]:
    """Directory for cached eigendecompositions; ``None`` disables the cache."""
    value = os.getenv("GRAPHFB_EIG_CACHE", "").strip()
    if not value:
        return None
    return Path(value).expanduser()


def get_dense_limit() -> int:
    value = os.getenv("GRAPHFB_DENSE_LIMIT", "").strip()
    if not value:
        return DEFAULT_DENSE_LIMIT
    try:
        return int(value)
    except ValueError:
        return DEFAULT_DENSE_LIMIT


def get_log_level() -> int:
    name = os.getenv("GRAPHFB_LOG_LEVEL", "INFO").strip().upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.INFO


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(name)
    if not logger.handlers:
        # stdout carries CLI data, so log records go to stderr
        handler = logging.StreamHandler(sys.stderr)
        fmt = "%(asctime)s %(levelname)s %(name)s: %(message)s"
        handler.setFormatter(logging.Formatter(fmt))
        logger.addHandler(handler)
        logger.setLevel(get_log_level())
        # a root handler installed by the embedding program would print every record twice
        logger.propagate = False
    _LOGGERS[name] = logger
    return logger


def set_log_level(level: int) -> None:
    """Apply ``level`` to every logger handed out by :func:`get_logger`."""
    for logger in _LOGGERS.values():
        logger.setLevel(level)
