"""
Common utilities for the community recovery scripts.

This package provides shared functionality for every pipeline and the CLI:
- Configuration and environment variable loading
- Logging utilities
- Exceptions and common helper functions
"""

from .config import load_config, get_env
from .errors import (
    RecoveryError,
    ConvergenceError,
    RankDeficientError,
    SelectionError,
    ConfigError,
)
from .logger import setup_logger, get_logger, ROOT_LOGGER
from .utils import confirm_action, format_output, format_table, parse_overrides, handle_error

__all__ = [
    'load_config',
    'get_env',
    'RecoveryError',
    'ConvergenceError',
    'RankDeficientError',
    'SelectionError',
    'ConfigError',
    'setup_logger',
    'get_logger',
    'ROOT_LOGGER',
    'confirm_action',
    'format_output',
    'format_table',
    'parse_overrides',
    'handle_error',
]
