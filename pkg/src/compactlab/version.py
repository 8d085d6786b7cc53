"""Version information for run manifests and the version endpoint."""

import logging
import os
from importlib import metadata

logger = logging.getLogger(__name__)

FALLBACK_VERSION = "0.1.0"


def tool_version() -> str:
    """Installed package version, or the source-tree version when not installed."""
    try:
        return metadata.version("compactlab")
    except metadata.PackageNotFoundError:
        logger.debug("compactlab is not installed; using fallback version")
        return FALLBACK_VERSION


def get_version_info() -> dict[str, str | None]:
    """Get package version plus git commit and timestamp from environment variables."""
    return {
        "version": tool_version(),
        "git-commit": os.getenv("GIT_COMMIT"),
        "git-timestamp": os.getenv("GIT_TIMESTAMP"),
    }
