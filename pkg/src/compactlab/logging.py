"""Centralized logging configuration for compactlab.

Installs one formatter and level for the CLI, the HTTP service and long simulation
runs alike. The configuration is idempotent and safe to call multiple times.
"""

from __future__ import annotations

import logging
from typing import Final

from compactlab.config import get_settings

LOG_FORMAT: Final = "%(asctime)s %(levelname)s [%(name)s] %(message)s"


def configure_logging(level: int | None = None) -> None:
    """Configure root logging once; an explicit ``level`` always applies.

    Without ``level`` the root logger runs at DEBUG when ``COMPACTLAB_DEBUG`` is set
    and INFO otherwise.
    """

    root = logging.getLogger()
    if root.handlers:
        if level is not None:
            root.setLevel(level)
        return

    if level is None:
        level = logging.DEBUG if get_settings().debug_enabled else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)
