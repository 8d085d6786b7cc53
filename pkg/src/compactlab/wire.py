"""Shared base for models that are written to JSON outputs or sent over HTTP."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, model_serializer


class WireModel(BaseModel):
    """Serialization omits any key whose value is ``None``.

    Wave descriptors, frame expansions and API payloads carry many family-specific
    optional fields; a KdV soliton has no ``lambda`` and a compacton has no ``Vprime``,
    so those keys vanish from the JSON instead of appearing as ``null``.
    """

    @model_serializer(mode="wrap")
    def _drop_none(self, handler: Any) -> dict[str, Any]:
        return {key: value for key, value in handler(self).items() if value is not None}
