"""Runtime configuration: .env loading, worker cap, and package-wide defaults."""

from __future__ import annotations

import logging
import os

from dotenv import load_dotenv

from .errors import ConfigError

load_dotenv()

THREADS_ENV = "HORIZON_RISK_THREADS"
LOG_LEVEL_ENV = "HORIZON_RISK_LOG_LEVEL"

# Horizon model
MARGIN = 0.1
QUADRATURE_ORDER = 16

# Risk laboratory
DEFAULT_SWEEP_TRIALS = 50
DEFAULT_TUNING_TRIALS = 10
DEFAULT_NLM_MAX_N = 256
MIN_RATE_POINTS = 3


def worker_count() -> int:
    """Number of worker processes for parallel trials.

    Reads HORIZON_RISK_THREADS; falls back to all cores.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {value}")
    return value


def log_level() -> int:
    """Logging level for the CLI, from HORIZON_RISK_LOG_LEVEL (default WARNING)."""
    name = os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ConfigError(f"{LOG_LEVEL_ENV}: unknown level {name!r}")
    return level
