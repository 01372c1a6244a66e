"""
Logging configuration using Loguru

Console output goes to stderr so that stdout stays clean for CLI results.
"""

import os
import sys
from pathlib import Path
from typing import Optional, Union

from loguru import logger as loguru_logger

CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"


def setup_logging(
    level: Optional[str] = None,
    to_file: Optional[bool] = None,
    log_dir: Union[str, Path] = 'logs',
):
    """
    (Re)install the curvkit sinks

    Args:
        level: Console level, defaults to LOG_LEVEL or INFO
        to_file: Also write rotating combined/error logs, defaults to LOG_TO_FILE
        log_dir: Directory of the file sinks

    Returns:
        The configured loguru logger
    """
    level = (level or os.getenv('LOG_LEVEL', 'INFO')).upper()
    if to_file is None:
        to_file = os.getenv('LOG_TO_FILE', 'false').lower() == 'true'

    loguru_logger.remove()
    loguru_logger.add(sys.stderr, format=CONSOLE_FORMAT, level=level, colorize=True)

    if to_file:
        log_dir = Path(log_dir)
        loguru_logger.add(
            log_dir / "combined.log",
            format=FILE_FORMAT,
            level="DEBUG",
            rotation="10 MB",
            retention="30 days",
            compression="zip"
        )
        loguru_logger.add(
            log_dir / "error.log",
            format=FILE_FORMAT,
            level="ERROR",
            rotation="10 MB",
            retention="30 days",
            compression="zip"
        )
    return loguru_logger


logger = setup_logging()
