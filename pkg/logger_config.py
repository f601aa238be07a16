import logging
import sys
from typing import Optional, Set, Union

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

# Names of every logger handed out by setup_logger, so the CLI can retune them.
_managed_loggers: Set[str] = set()


def parse_level(level: Union[int, str, None]) -> int:
    """
    Turn a level name or number into a logging level.

    Args:
        level: "DEBUG", "info", 10, ... or None for INFO

    Returns:
        The numeric logging level

    Raises:
        ValueError: If the name is not a known logging level
    """
    if level is None:
        return logging.INFO
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(level.strip().upper())
    if not isinstance(resolved, int):
        raise ValueError(f"Unknown log level: {level}")
    return resolved


def setup_logger(name: str, level: Optional[Union[int, str]] = None) -> logging.Logger:
    """
    Set up a logger with the specified name and level.

    Records go to stderr so that JSON written to stdout stays machine readable.

    Args:
        name: The name of the logger
        level: The logging level (defaults to INFO if not specified)

    Returns:
        A configured logger instance
    """
    numeric_level = parse_level(level)
    logger = logging.getLogger(name)

    # Only configure the logger if it hasn't been configured yet
    if not logger.handlers:
        logger.setLevel(numeric_level)

        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(logging.NOTSET)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(handler)

        # Prevent propagation to the root logger
        logger.propagate = False

    _managed_loggers.add(name)
    return logger


def set_log_level(level: Union[int, str]) -> None:
    """Apply one level to every logger created through setup_logger."""
    numeric_level = parse_level(level)
    for name in _managed_loggers:
        logging.getLogger(name).setLevel(numeric_level)
