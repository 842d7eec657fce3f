import logging
import os
from dataclasses import dataclass
from functools import lru_cache

# Load environment variables
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 10_000
DEFAULT_MAX_DEPTH = 500
DEFAULT_LOG_LEVEL = "INFO"


@dataclass(frozen=True)
class Settings:
    """Exploration bounds and logging level shared by the CLI and the API."""

    max_states: int = DEFAULT_MAX_STATES
    max_depth: int = DEFAULT_MAX_DEPTH
    log_level: str = DEFAULT_LOG_LEVEL


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default
    if value <= 0:
        logger.warning(f"Ignoring {name}={raw!r}: must be positive, using {default}")
        return default
    return value


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Read settings from the environment (and a `.env` file if present).

    Returns:
        Settings: bounds used when a caller does not pass explicit ones
    """
    return Settings(
        max_states=_int_from_env("PAFAS_MAX_STATES", DEFAULT_MAX_STATES),
        max_depth=_int_from_env("PAFAS_MAX_DEPTH", DEFAULT_MAX_DEPTH),
        log_level=os.getenv("PAFAS_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper(),
    )
