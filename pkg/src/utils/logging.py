"""
Run Logging

One console stream and two log files per CLI run: a DEBUG trace of
everything and an ERROR-only file. Library modules only ever call
logging.getLogger(__name__); the handlers are owned here.

Key Features:
- Console summary on stdout, detailed and error-only files under log_dir
- Log files named after the subcommand that produced them
- Step framing driven by the {'success', 'error', 'files'} step results
- Timing of long sweeps and progress lines for chunked ones
"""

import functools
import logging
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, Optional, TypeVar

CONSOLE_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
FILE_DATEFMT = '%Y-%m-%d %H:%M:%S'
RULE = '=' * 50

F = TypeVar('F', bound=Callable[..., Any])


def _configured(handler: logging.Handler, level: int, fmt: str, datefmt: str) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt, datefmt=datefmt))
    return handler


def setup_logging(log_level: str = 'INFO', log_file: Optional[str] = None,
                  log_dir: str = './logs', run_name: Optional[str] = None) -> Path:
    """
    Route all toolkit logging to stdout and the run's log files.

    A second call replaces the handlers installed by the first.

    Args:
        log_level (str): Root level name ('DEBUG' ... 'CRITICAL')
        log_file (Optional[str]): Detailed log path. If None,
            coded_matmul[_<run_name>]_<timestamp>.log in log_dir.
        log_dir (str): Directory for both log files
        run_name (Optional[str]): Subcommand name used in the default file name

    Returns:
        Path: the detailed log file

    Raises:
        ValueError: on an unknown level name
    """
    level = logging.getLevelName(log_level.upper())
    if not isinstance(level, int):
        raise ValueError(f"unknown log level {log_level!r}")

    directory = Path(log_dir)
    directory.mkdir(parents=True, exist_ok=True)
    stamp = datetime.now().strftime('%Y%m%d_%H%M%S')
    stem = 'coded_matmul' if run_name is None else f'coded_matmul_{run_name}'
    detailed = Path(log_file) if log_file else directory / f'{stem}_{stamp}.log'
    errors = directory / f'errors_{stamp}.log'

    root = logging.getLogger()
    for handler in list(root.handlers):
        handler.close()
    root.handlers.clear()
    root.setLevel(level)

    root.addHandler(_configured(logging.StreamHandler(sys.stdout), max(logging.INFO, level),
                                CONSOLE_FORMAT, '%H:%M:%S'))
    root.addHandler(_configured(logging.FileHandler(detailed, encoding='utf-8'), logging.DEBUG,
                                FILE_FORMAT, FILE_DATEFMT))
    root.addHandler(_configured(logging.FileHandler(errors, encoding='utf-8'), logging.ERROR,
                                FILE_FORMAT, FILE_DATEFMT))

    logging.getLogger(__name__).debug(f"Logging at {log_level} to {detailed} (errors: {errors})")
    return detailed


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def log_execution_time(func: F) -> F:
    """Log how long func took, or how long it ran before raising."""
    logger = logging.getLogger(func.__module__)

    @functools.wraps(func)
    def timed(*args, **kwargs):
        start = time.perf_counter()
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.error(f"{func.__qualname__} failed after {time.perf_counter() - start:.2f} seconds: {e}")
            raise
        logger.info(f"{func.__qualname__} executed in {time.perf_counter() - start:.2f} seconds")
        return result

    return timed  # type: ignore[return-value]


def log_sweep_progress(logger: logging.Logger, label: str, done: int, total: int) -> None:
    """Progress line of a chunked sweep: DEBUG while running, INFO once complete."""
    level = logging.INFO if done >= total else logging.DEBUG
    logger.log(level, f"{label}: {done}/{total} ({100.0 * done / max(total, 1):.0f}%)")


def log_step(command: str, module_name: str) -> float:
    """
    Announce a CLI step.

    Returns:
        float: start time to hand back to log_step_result
    """
    logger = logging.getLogger(module_name)
    logger.info(f"Starting {command}")
    logger.info(RULE)
    return time.perf_counter()


def log_step_result(command: str, module_name: str, result: Dict[str, Any], started: float) -> None:
    """
    Log the outcome of a CLI step.

    Args:
        command (str): Subcommand name
        module_name (str): Logger name
        result (Dict[str, Any]): {'success', 'error', 'files'} returned by the step
        started (float): value returned by log_step
    """
    logger = logging.getLogger(module_name)
    duration = time.perf_counter() - started

    if result.get('success'):
        logger.info(f"✅ {command} completed successfully in {duration:.2f} seconds")
        emit = logger.info
    else:
        logger.error(f"❌ {command} failed after {duration:.2f} seconds")
        emit = logger.error
        if result.get('error'):
            emit(f"   error: {result['error']}")

    for name, path in (result.get('files') or {}).items():
        emit(f"   {name}: {path}")
    logger.info(RULE)
