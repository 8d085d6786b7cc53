from __future__ import annotations

import logging

from fastapi import FastAPI

from compactlab.api import routes
from compactlab.logging import configure_logging
from compactlab.version import tool_version


def create_app() -> FastAPI:
    """Construct the FastAPI application instance."""
    configure_logging()
    logger = logging.getLogger(__name__)
    logger.info("Initializing compactlab FastAPI application")

    app = FastAPI(
        title="compactlab",
        description="Similarity analysis, closed forms and frames for compacton equations",
        version=tool_version(),
    )
    app.include_router(routes.router)

    logger.info("Application routes registered")
    return app


app = create_app()
