"""
Process-level settings for the energy game solver
Read from the environment, with an optional .env file loaded first
"""
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

ENV_PREFIX = "ENERGY_"

DEFAULT_BRUTE_FORCE_LIMIT = 1_000_000
DEFAULT_EXACT_SIMPLICITY_LIMIT = 10
DEFAULT_VERIFY_LIMIT = 200
DEFAULT_LOG_LEVEL = "WARNING"


@dataclass(frozen=True)
class Settings:
    """Tunables shared by the solver, the oracles and the CLI"""
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT
    exact_simplicity_limit: int = DEFAULT_EXACT_SIMPLICITY_LIMIT  # max n for the exact zero-cycle search
    verify_limit: int = DEFAULT_VERIFY_LIMIT  # max n for oracle strategy verification
    log_level: str = DEFAULT_LOG_LEVEL


def _read_int(name: str, default: int) -> int:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring %s%s=%r: not an integer", ENV_PREFIX, name, raw)
        return default
    if value < 0:
        logger.warning("ignoring %s%s=%r: negative", ENV_PREFIX, name, raw)
        return default
    return value


def load_settings(env_file: Optional[Path] = None) -> Settings:
    """
    Build Settings from ENERGY_* environment variables

    Args:
        env_file: Explicit .env file; when None, python-dotenv searches upwards
            from the working directory

    Returns:
        Settings with defaults for anything unset or malformed
    """
    if env_file is not None:
        load_dotenv(env_file, override=False)
    else:
        load_dotenv(override=False)

    level = os.environ.get(ENV_PREFIX + "LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(level), int):
        logger.warning("ignoring %sLOG_LEVEL=%r", ENV_PREFIX, level)
        level = DEFAULT_LOG_LEVEL

    return Settings(
        brute_force_limit=_read_int("BRUTE_FORCE_LIMIT", DEFAULT_BRUTE_FORCE_LIMIT),
        exact_simplicity_limit=_read_int("EXACT_SIMPLICITY_LIMIT", DEFAULT_EXACT_SIMPLICITY_LIMIT),
        verify_limit=_read_int("VERIFY_LIMIT", DEFAULT_VERIFY_LIMIT),
        log_level=level,
    )
