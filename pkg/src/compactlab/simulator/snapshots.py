"""Snapshot writers: ``t,x,u`` CSV rows and little-endian binary records.

A binary record is ``N`` (int64), ``t`` (float64) and ``u[0..N)`` (float64), all
little-endian, records concatenated without padding.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable
from pathlib import Path

import numpy as np

from compactlab.simulator.models import Snapshot

_COUNT = np.dtype("<i8")
_VALUE = np.dtype("<f8")


def snapshots_csv(x: np.ndarray, snapshots: Iterable[Snapshot]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["t", "x", "u"])
    for snapshot in snapshots:
        t = f"{snapshot.t:.17g}"
        for xv, uv in zip(x, snapshot.u, strict=True):
            writer.writerow([t, f"{xv:.17g}", f"{uv:.17g}"])
    return buffer.getvalue()


def encode_record(t: float, u: np.ndarray) -> bytes:
    values = np.asarray(u, dtype=_VALUE)
    return (
        np.array([len(values)], dtype=_COUNT).tobytes()
        + np.array([t], dtype=_VALUE).tobytes()
        + values.tobytes()
    )


def write_binary(path: Path, snapshots: Iterable[Snapshot]) -> Path:
    with path.open("wb") as handle:
        for snapshot in snapshots:
            handle.write(encode_record(snapshot.t, snapshot.u))
    return path


def read_binary(path: Path) -> list[tuple[float, np.ndarray]]:
    data = path.read_bytes()
    records = []
    offset = 0
    while offset < len(data):
        if len(data) - offset < 16:
            raise ValueError(f"truncated snapshot header at byte {offset}")
        (n,) = np.frombuffer(data, dtype=_COUNT, count=1, offset=offset)
        (t,) = np.frombuffer(data, dtype=_VALUE, count=1, offset=offset + 8)
        end = offset + 16 + 8 * int(n)
        if end > len(data):
            raise ValueError(f"truncated snapshot of {n} values at byte {offset}")
        u = np.frombuffer(data, dtype=_VALUE, count=int(n), offset=offset + 16).copy()
        records.append((float(t), u))
        offset = end
    return records
