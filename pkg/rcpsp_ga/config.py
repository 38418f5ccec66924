"""
    Configuration of the solver. Contains the parameters that can be changed by the user,
    either through environment variables or a `.env` file in the working directory.

        RCPSP_GA_THREADS      worker processes for fitness evaluation and sweep cells
        RCPSP_GA_LOG_LEVEL    logging level name
        RCPSP_GA_ORACLE_CAP   maximum number of activity lists the oracle may visit
"""

import os
import logging
import dotenv
import psutil

from rcpsp_ga.errors import ConfigError

# Load environment variables from a ".env" file
dotenv.load_dotenv()

logger = logging.getLogger(__name__)


def _positive_int(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a positive integer, got '{raw}'")
    if value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value}")
    return value


class Config:
    def __init__(self):
        # GA defaults, the best known EST setting on the maintenance case
        self.population_size = 10
        self.crossover_probability = 0.7
        self.crossover = "pmx"
        self.mutation_probability = 0.1
        self.mutation = "swap"
        self.policy = "est"
        self.elite_count = 1
        # desk-scale stopping; full runs use --time-limit-ms
        self.max_generations = 300
        self.time_limit_ms = None
        self.seed = 0

    @property
    def threads(self):
        requested = _positive_int("RCPSP_GA_THREADS", 1)
        available = psutil.cpu_count() or 1
        if requested > available:
            logger.warning(f"RCPSP_GA_THREADS={requested} exceeds {available} CPUs, clamping")
            return available
        return requested

    @property
    def log_level(self):
        name = os.getenv("RCPSP_GA_LOG_LEVEL", "INFO").upper()
        level = logging.getLevelName(name)
        if not isinstance(level, int):
            raise ConfigError(f"RCPSP_GA_LOG_LEVEL '{name}' is not a logging level")
        return level

    @property
    def oracle_cap(self):
        return _positive_int("RCPSP_GA_ORACLE_CAP", 10_000_000)


# Singleton instance of the Config class
config = Config()
