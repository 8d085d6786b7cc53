"""Runtime configuration helpers for compactlab.

Numerical tolerances, simulator safety factors and service settings are read from
``COMPACTLAB_*`` environment variables so batch runs can be tuned without code
changes. Library functions accept explicit keyword overrides and only fall back to
these settings when an argument is omitted.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from functools import lru_cache

logger = logging.getLogger(__name__)


@dataclass
class Settings:
    """Application settings derived from environment variables."""

    debug_enabled: bool = False

    # --- equation DSL ---
    max_derivative_order: int = 6

    # --- width root finding ---
    root_rtol: float = 1e-12
    root_scan_points: int = 4000
    root_scan_min: float = 1e-6
    root_scan_max: float = 1e6

    # --- simulator ---
    # auto dt = cfl * dx**3 / max(1, max|flux'|)
    cfl: float = 0.1
    blowup_factor: float = 1e3
    mass_rtol: float = 1e-6

    # --- frame ---
    frame_points_per_cell: int = 32

    # --- batch / service ---
    jobs: int = 1
    host: str = "0.0.0.0"
    port: int = 8000


def _env_flag(name: str, default: bool = False) -> bool:
    """Return a boolean flag controlled by an environment variable."""

    raw_value = os.getenv(name)
    if raw_value is None:
        return default

    return raw_value.strip().lower() in {"1", "true", "yes", "on", "y"}


def _env_float(name: str, default: float) -> float:
    raw_value = os.getenv(name)
    if raw_value is None or not raw_value.strip():
        return default
    try:
        return float(raw_value)
    except ValueError as e:
        raise ValueError(f"{name} must be a number, got {raw_value!r}") from e


def _env_int(name: str, default: int) -> int:
    raw_value = os.getenv(name)
    if raw_value is None or not raw_value.strip():
        return default
    try:
        return int(raw_value)
    except ValueError as e:
        raise ValueError(f"{name} must be an integer, got {raw_value!r}") from e


@lru_cache
def get_settings() -> Settings:
    """Load settings from the environment with sensible defaults."""

    settings = Settings(
        debug_enabled=_env_flag("COMPACTLAB_DEBUG", False),
        max_derivative_order=_env_int("COMPACTLAB_MAX_DERIVATIVE_ORDER", 6),
        root_rtol=_env_float("COMPACTLAB_ROOT_RTOL", 1e-12),
        root_scan_points=_env_int("COMPACTLAB_ROOT_SCAN_POINTS", 4000),
        root_scan_min=_env_float("COMPACTLAB_ROOT_SCAN_MIN", 1e-6),
        root_scan_max=_env_float("COMPACTLAB_ROOT_SCAN_MAX", 1e6),
        cfl=_env_float("COMPACTLAB_CFL", 0.1),
        blowup_factor=_env_float("COMPACTLAB_BLOWUP_FACTOR", 1e3),
        mass_rtol=_env_float("COMPACTLAB_MASS_RTOL", 1e-6),
        frame_points_per_cell=_env_int("COMPACTLAB_FRAME_POINTS_PER_CELL", 32),
        jobs=_env_int("COMPACTLAB_JOBS", 1),
        host=os.getenv("COMPACTLAB_HOST", "0.0.0.0"),
        port=_env_int("COMPACTLAB_PORT", 8000),
    )
    logger.info(
        "Loaded settings: max_order=%s root_rtol=%s scan=%s cfl=%s blowup=%s jobs=%s debug=%s",
        settings.max_derivative_order,
        settings.root_rtol,
        settings.root_scan_points,
        settings.cfl,
        settings.blowup_factor,
        settings.jobs,
        settings.debug_enabled,
    )
    return settings
