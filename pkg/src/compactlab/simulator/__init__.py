"""Periodic method-of-lines simulation of conservation-form K(n,m)-type equations."""

from compactlab.simulator.detect import detect_compactons, measure_speed, track
from compactlab.simulator.initial import initial_profile, stretched_bump
from compactlab.simulator.integrate import auto_dt, rhs, run, step
from compactlab.simulator.models import (
    BlowUpError,
    CompactonInventory,
    DetectedCompacton,
    RunDiagnostics,
    SimConfig,
    SimState,
    SimTrace,
    Snapshot,
)
from compactlab.simulator.snapshots import read_binary, snapshots_csv, write_binary

__all__ = [
    "BlowUpError",
    "CompactonInventory",
    "DetectedCompacton",
    "RunDiagnostics",
    "SimConfig",
    "SimState",
    "SimTrace",
    "Snapshot",
    "auto_dt",
    "detect_compactons",
    "initial_profile",
    "measure_speed",
    "read_binary",
    "rhs",
    "run",
    "snapshots_csv",
    "step",
    "stretched_bump",
    "track",
    "write_binary",
]
