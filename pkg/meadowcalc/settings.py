"""
Configuration for MeadowCalc.
Values come from the environment (optionally a .env file) and can be
overridden by command-line flags in main.py.
"""

import os
import logging
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_CACHE_DIR = os.path.join(os.path.dirname(__file__), '..', 'cache')


@dataclass(frozen=True)
class Settings:
    """
    Runtime settings.

    Attributes:
        max_atoms: Largest event space an exhaustive search may build
        seed: Seed for sampled law checks
        joint_max_cells: Desk-scale bound on atom tuples for joint_exists
        cache_dir: Directory used by diskcache
        cache_enabled: Whether searches consult the cache
        cache_ttl: Seconds a cached search result stays valid
        log_level: Root logging level name
    """
    max_atoms: int = 3
    seed: int = 0
    joint_max_cells: int = 64
    cache_dir: str = DEFAULT_CACHE_DIR
    cache_enabled: bool = True
    cache_ttl: int = 3600 * 24
    log_level: str = "WARNING"


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


def load_settings() -> Settings:
    """
    Build settings from the environment.

    Returns:
        Settings: Values from MEADOW_* variables, defaults otherwise
    """
    return Settings(
        max_atoms=_int_env("MEADOW_MAX_ATOMS", 3),
        seed=_int_env("MEADOW_SEED", 0),
        joint_max_cells=_int_env("MEADOW_JOINT_MAX_CELLS", 64),
        cache_dir=os.getenv("MEADOW_CACHE_DIR") or DEFAULT_CACHE_DIR,
        cache_enabled=os.getenv("MEADOW_CACHE_ENABLED", "1") not in ("0", "false", "no"),
        cache_ttl=_int_env("MEADOW_CACHE_TTL", 3600 * 24),
        log_level=os.getenv("LOG_LEVEL", "WARNING").upper(),
    )
