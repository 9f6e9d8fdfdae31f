"""
Configuration module for lvphase.

This module provides default configuration settings, the run-file parser
and utilities for managing configuration across the package.
"""

from lvphase.config.settings import DEFAULT_CONFIG, get_config

__all__ = ["DEFAULT_CONFIG", "get_config"]
