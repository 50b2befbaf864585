"""Configuration loading for the qgames CLI and MCP server.

Settings come from environment variables, optionally seeded from a .env file
in ~/.config/qgames/ or the current directory:

    QGAMES_TOLERANCE          - equilibrium / regime tolerance (default 1e-9)
    QGAMES_SWEEP_RESOLUTION   - X intervals for sweeps (default 1000)
    QGAMES_VERIFY_GRID        - deviation grid size for verification (default 101)
    QGAMES_FAMILY_GRID        - X intervals for the family table (default 1000)
    QGAMES_LOG_LEVEL          - logging level name (default WARNING)
"""

import os
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from server.errors import DomainError

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

DEFAULT_TOLERANCE = 1e-9
DEFAULT_SWEEP_RESOLUTION = 1000
DEFAULT_VERIFY_GRID = 101
DEFAULT_FAMILY_GRID = 1000


@dataclass(frozen=True)
class Settings:
    """Runtime settings shared by the CLI and the tool surface."""
    tolerance: float = DEFAULT_TOLERANCE
    sweep_resolution: int = DEFAULT_SWEEP_RESOLUTION
    verify_grid: int = DEFAULT_VERIFY_GRID
    family_grid: int = DEFAULT_FAMILY_GRID
    log_level: str = "WARNING"


def load_config(config_dir: Optional[Path] = None) -> Optional[Path]:
    """Load configuration from ~/.config/qgames/.env or current directory.

    Existing environment variables are never overwritten.

    Args:
        config_dir: Directory to look in first (default ~/.config/qgames)

    Returns:
        Path of the .env file that was applied, or None
    """
    config_dir = config_dir or Path.home() / ".config" / "qgames"
    config_file = config_dir / ".env"

    if config_file.exists():
        env_path = config_file
    else:
        env_path = Path.cwd() / ".env"

    if not env_path.exists():
        return None

    with open(env_path) as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith('#'):
                key, _, value = line.partition('=')
                if key and value:
                    os.environ.setdefault(key.strip(), value.strip())
    return env_path


def _env_number(key: str, default, cast):
    raw = os.getenv(key)
    if raw is None or not raw.strip():
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        raise DomainError(f"Invalid value for {key}: {raw!r}")


def load_settings(default_log_level: str = "WARNING") -> Settings:
    """Build Settings from the environment.

    Args:
        default_log_level: Level used when QGAMES_LOG_LEVEL is unset

    Returns:
        Settings instance

    Raises:
        DomainError: If a numeric variable cannot be parsed or is out of range
    """
    settings = Settings(
        tolerance=_env_number("QGAMES_TOLERANCE", DEFAULT_TOLERANCE, float),
        sweep_resolution=_env_number("QGAMES_SWEEP_RESOLUTION", DEFAULT_SWEEP_RESOLUTION, int),
        verify_grid=_env_number("QGAMES_VERIFY_GRID", DEFAULT_VERIFY_GRID, int),
        family_grid=_env_number("QGAMES_FAMILY_GRID", DEFAULT_FAMILY_GRID, int),
        log_level=(os.getenv("QGAMES_LOG_LEVEL") or default_log_level).upper(),
    )

    if settings.tolerance <= 0:
        raise DomainError("QGAMES_TOLERANCE must be positive")
    for key, value in (
        ("QGAMES_SWEEP_RESOLUTION", settings.sweep_resolution),
        ("QGAMES_VERIFY_GRID", settings.verify_grid),
        ("QGAMES_FAMILY_GRID", settings.family_grid),
    ):
        if value < 2:
            raise DomainError(f"{key} must be at least 2, got {value}")

    return settings


def configure_logging(level: str = "WARNING") -> None:
    """Configure root logging to stderr with the project format."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format=LOG_FORMAT,
    )
