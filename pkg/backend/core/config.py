import logging
import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from . import constants


@dataclass(frozen=True)
class Settings:
    """
    Environment driven defaults. Command line flags override every field.

    Attributes:
        jobs (int): Default number of worker processes (ORIGAMI_JOBS).
        cache_dir (Path | None): Folder for census cache files (ORIGAMI_CACHE_DIR), None keeps
            censuses in memory only.
        max_surfaces (int): Census size at which enumeration aborts (ORIGAMI_MAX_SURFACES).
        log_level (str): Logging level name (ORIGAMI_LOG_LEVEL).
    """
    jobs: int = constants.DEFAULT_JOBS
    cache_dir: Path | None = None
    max_surfaces: int = constants.DEFAULT_MAX_SURFACES
    log_level: str = constants.DEFAULT_LOG_LEVEL


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ValueError(f"Environment variable {name} must be an integer, got '{raw}'") from e
    if value <= 0:
        raise ValueError(f"Environment variable {name} must be positive, got {value}")
    return value


def load_settings() -> Settings:
    """
    Load settings from the process environment, reading a ``.env`` file first if present.

    Returns:
        Settings: The resolved settings.

    Raises:
        ValueError: If a numeric variable is malformed or the log level is unknown.
    """
    load_dotenv()
    log_level = os.getenv("ORIGAMI_LOG_LEVEL", constants.DEFAULT_LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(log_level), int):
        raise ValueError(f"Unknown log level in ORIGAMI_LOG_LEVEL: '{log_level}'")

    cache_dir = os.getenv("ORIGAMI_CACHE_DIR")
    return Settings(
        jobs=_int_from_env("ORIGAMI_JOBS", constants.DEFAULT_JOBS),
        cache_dir=Path(cache_dir) if cache_dir else None,
        max_surfaces=_int_from_env("ORIGAMI_MAX_SURFACES", constants.DEFAULT_MAX_SURFACES),
        log_level=log_level,
    )
