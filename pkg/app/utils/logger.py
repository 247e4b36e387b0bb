import logging
import sys


LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
LOG_LEVEL = logging.WARNING

_APP_LOGGERS: set[str] = set()


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger with the specified name.
    Each logger gets its own stderr handler and no propagation so stdout stays clean.
    """
    logger = logging.getLogger(name)

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))

        logger.setLevel(LOG_LEVEL)
        logger.addHandler(handler)
        logger.propagate = False

    _APP_LOGGERS.add(name)
    return logger


def configure_logging(level: str = "WARNING") -> None:
    """Apply one level to the root logger and every application logger."""
    numeric = getattr(logging, level.upper(), logging.WARNING)

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.WARNING)

    for name in _APP_LOGGERS:
        logging.getLogger(name).setLevel(numeric)

    global LOG_LEVEL
    LOG_LEVEL = numeric
