"""
Utility modules for the Max3Sat suite.

Run logging and environment settings.
"""

from .logging_config import LoggingManager, setup_logging_for_run, get_logger
from .settings import Settings, ENV_VARS, DEFAULT_EXHAUSTIVE_LIMIT

__all__ = ['LoggingManager', 'setup_logging_for_run', 'get_logger', 'Settings', 'ENV_VARS', 'DEFAULT_EXHAUSTIVE_LIMIT']
