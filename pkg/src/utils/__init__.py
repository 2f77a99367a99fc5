"""
Utils module for the coded matrix multiplication toolkit.

This module provides utility functions for logging and configuration.
Supports every subcommand with consistent logging and configuration management.

Modules:
- logging: Centralized logging configuration
- config: Configuration management and settings
"""

from .logging import (setup_logging, get_logger, log_execution_time, log_sweep_progress,
                      log_step, log_step_result)
from .config import Config, load_config, DEFAULT_CONFIG, COST_MODELS

__all__ = ['setup_logging', 'get_logger', 'log_execution_time', 'log_sweep_progress',
           'log_step', 'log_step_result', 'Config', 'load_config', 'DEFAULT_CONFIG', 'COST_MODELS']
