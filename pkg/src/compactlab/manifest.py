"""Run manifests written next to every batch output."""

from __future__ import annotations

import hashlib
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Literal

from pydantic import Field

from compactlab.version import tool_version
from compactlab.wire import WireModel

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def sha256_text(data: str | bytes) -> str:
    raw = data.encode() if isinstance(data, str) else data
    return hashlib.sha256(raw).hexdigest()


def dump_json(payload: Any) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n"


class RunManifest(WireModel):
    """What ran, on what inputs, and which files it produced.

    Everything except ``timestamp`` is a function of the command line and the input
    files, so two runs with the same arguments produce identical manifests up to the
    timestamp.
    """

    subcommand: str
    argv: list[str]
    tool_version: str = Field(default_factory=tool_version)
    timestamp: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )
    inputs: dict[str, str] = Field(default_factory=dict)
    outputs: list[str] = Field(default_factory=list)
    status: Literal["running", "ok", "failed"] = "running"
    exit_code: int | None = None
    error: str | None = None

    def hash_input(self, name: str, data: str | bytes) -> None:
        self.inputs[name] = sha256_text(data)

    def write_output(self, directory: Path, name: str, text: str) -> Path:
        path = directory / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        self.record_output(directory, path)
        return path

    def record_output(self, directory: Path, path: Path) -> None:
        try:
            relative = path.resolve().relative_to(directory.resolve()).as_posix()
        except ValueError:
            relative = str(path)
        if relative not in self.outputs:
            self.outputs.append(relative)

    def finish(self, exit_code: int, error: BaseException | None = None) -> None:
        self.exit_code = exit_code
        self.status = "ok" if exit_code == 0 else "failed"
        if error is not None:
            self.error = f"{type(error).__name__}: {error}"

    def write(self, directory: Path) -> Path:
        path = directory / MANIFEST_NAME
        path.write_text(dump_json(self.model_dump()), encoding="utf-8")
        logger.info(
            "Wrote %s (%s, %s output(s))", path, self.status, len(self.outputs)
        )
        return path


def read_manifest(directory: Path) -> RunManifest:
    path = directory / MANIFEST_NAME
    return RunManifest.model_validate_json(path.read_text(encoding="utf-8"))
