#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Loguru configuration for lvphase.

This module provides functions for configuring Loguru throughout the package.
"""

import os
import sys
from datetime import datetime

from loguru import logger


def setup_logging(config=None, quiet=False):
    """
    Configure Loguru for lvphase.

    Args:
        config: Optional configuration dictionary
        quiet: Raise the console level to WARNING (CLI ``--quiet``)

    Returns:
        The configured loguru logger
    """
    if config is None:
        config = {}

    # Remove all existing handlers
    logger.remove()

    debug_mode = config.get("DEBUG_MODE", False)
    log_level = "DEBUG" if debug_mode else str(config.get("LOG_LEVEL", "INFO")).upper()
    if quiet:
        log_level = "WARNING"

    # Console logger, always stderr so CSV on stdout stays clean
    logger.add(
        sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        level=log_level,
        colorize=True,
    )

    # File logger only on request
    log_dir = config.get("LOG_DIR")
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        current_date = datetime.now().strftime("%Y-%m-%d")
        log_file = os.path.join(log_dir, f"lvphase_{current_date}.log")
        logger.add(
            log_file,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            level=log_level,
            rotation="10 MB",
            compression="zip",
            retention="30 days",
        )
        logger.debug(f"Logging configured with loguru: level={log_level}, file={log_file}")
    else:
        logger.debug(f"Logging configured with loguru: level={log_level}")

    return logger

