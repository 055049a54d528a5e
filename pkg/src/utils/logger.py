import logging
import os
import sys

from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = "[%(name)s] %(message)s"


def get_logger(tag: str) -> logging.Logger:
    """
    Return the logger for a bracketed tag, e.g. get_logger("PCG") -> "[PCG] ...".

    Handlers are attached once per tag; level comes from CLUSTERBOUND_LOG_LEVEL.
    """
    logger = logging.getLogger(tag.upper())
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False
    level = os.getenv("CLUSTERBOUND_LOG_LEVEL", "INFO").upper()
    logger.setLevel(getattr(logging, level, logging.INFO))
    return logger
