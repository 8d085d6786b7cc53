"""HTTP layer for the compactlab FastAPI service."""

__all__: list[str] = []
