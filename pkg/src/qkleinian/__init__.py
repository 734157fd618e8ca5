"""Dynamics of cyclic groups acting on the quaternionic projective plane."""
import logging
import os

from .errors import QKError

__version__ = "0.1.0"

_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def configure_logging(level=None):
    """Route package logs to stderr at the level named by QK_LOG (default: error)."""
    name = (level or os.environ.get("QK_LOG", "error")).lower()
    logger = logging.getLogger(__name__)
    logger.setLevel(_LEVELS.get(name, logging.ERROR))
    if not logger.handlers:
        h = logging.StreamHandler()
        h.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(h)
    return logger


__all__ = ["QKError", "configure_logging", "__version__"]
