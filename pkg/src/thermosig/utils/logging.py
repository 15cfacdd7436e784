#!/usr/bin/env python3
"""
Logging Configuration
Unified logging system using loguru for all thermosig components
"""

import sys
import os
from pathlib import Path
from typing import Optional

from loguru import logger as _logger

# Remove default handler
_logger.remove()

DEBUG_MODE = os.getenv("THERMOSIG_DEBUG", "0") == "1"
LOG_LEVEL = "DEBUG" if DEBUG_MODE else "INFO"

LOG_DIR = Path.home() / ".local" / "share" / "thermosig" / "logs"
LOG_FILE: Optional[Path] = LOG_DIR / "thermosig.log"

FORMAT = "<level>{level: <8}</level> | " "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - " "<level>{message}</level>"

_console_handler_id = _logger.add(
    sys.stderr,
    format=FORMAT,
    level=LOG_LEVEL,
    colorize=True,
)

# no file sink when the home directory is read-only
try:
    LOG_DIR.mkdir(parents=True, exist_ok=True)
    _logger.add(
        str(LOG_FILE),
        format=FORMAT,
        level="DEBUG",
        rotation="10 MB",
        retention="7 days",
    )
except OSError:
    LOG_FILE = None

logger = _logger


def _swap_console_level(level: str) -> None:
    global _console_handler_id
    try:
        logger.remove(_console_handler_id)
    except ValueError:
        pass
    _console_handler_id = logger.add(
        sys.stderr,
        format=FORMAT,
        level=level,
        colorize=True,
    )


def enable_debug():
    """Enable debug mode by lowering console log level to DEBUG"""
    _swap_console_level("DEBUG")
    logger.debug("Debug mode enabled")


def disable_debug():
    """Disable debug mode by raising console log level to INFO"""
    _swap_console_level("INFO")


if DEBUG_MODE:
    logger.debug("Debug mode enabled via THERMOSIG_DEBUG environment variable")
    logger.debug(f"Log file: {LOG_FILE}")
