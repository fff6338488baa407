"""Project logger configuration module

Attributes:
    logger (logging.Logger): project logger
"""
import logging
from pathlib import Path
from typing import Optional

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

logger = logging.getLogger("rlmask")
stream_handler = logging.StreamHandler()
stream_handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT))
logger.addHandler(stream_handler)
logger.propagate = False

_file_handler: Optional[logging.FileHandler] = None


def configure_logging(verbose: bool = False, debug: bool = False, log_file: Optional[Path] = None):
    """Set the project logger level and, optionally, mirror records into a run log file.

    Args:
        verbose: If true, the level is INFO.
        debug: If true, the level is DEBUG (takes precedence over ``verbose``).
            Otherwise the level is WARNING.
        log_file: Path of a log file kept next to the run outputs.
            A previously attached file handler is replaced.
    """
    global _file_handler

    if debug:
        logger.setLevel(logging.DEBUG)
    elif verbose:
        logger.setLevel(logging.INFO)
    else:
        logger.setLevel(logging.WARNING)

    if _file_handler is not None:
        logger.removeHandler(_file_handler)
        _file_handler.close()
        _file_handler = None

    if log_file is not None:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        _file_handler = logging.FileHandler(log_file, encoding="utf-8")
        _file_handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT))
        logger.addHandler(_file_handler)
