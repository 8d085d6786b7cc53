"""Configuration, state and result types for periodic method-of-lines runs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from compactlab.config import get_settings
from compactlab.dsl import FluxTerm, conservation_form, resolve_equation
from compactlab.wire import WireModel

HYPERVISCOSITY_SCALE = 1e-4
EXTREMA_HISTORY = 256


def is_power_of_two(n: int) -> bool:
    return n > 0 and not n & (n - 1)


class SimConfig(BaseModel):
    """A periodic run of ``u_t = -sum(c * d^d/dx^d (u^m)) - mu * u_xxxx`` on ``[-L/2, L/2)``.

    ``equation`` is DSL text or an alias; it must be in conservation form. ``dt="auto"``
    picks ``cfl * dx^3 / max(1, sum(|c| * m * max|u|^(m-1)))`` from the current field,
    re-evaluated at every kept state.
    """

    model_config = ConfigDict(frozen=True)

    length: float = Field(gt=0)
    points: int = Field(1024, ge=16)
    t_end: float = Field(gt=0)
    dt: float | Literal["auto"] = "auto"
    hyperviscosity: float | None = Field(None, ge=0)
    output_stride: int = Field(100, ge=1)
    equation: str = "K22"
    params: dict[str, float] = Field(default_factory=dict)
    scheme_order: Literal[2, 4] = 4
    cfl: float | None = Field(None, gt=0)
    blowup_factor: float | None = Field(None, gt=1)
    mass_rtol: float | None = Field(None, gt=0)
    detect_threshold: float | None = Field(None, gt=0)

    _fluxes: list[FluxTerm] = PrivateAttr(default_factory=list)

    @model_validator(mode="after")
    def _check_grid_and_equation(self) -> SimConfig:
        if not is_power_of_two(self.points):
            raise ValueError(f"grid points must be a power of two, got {self.points}")
        if self.dt != "auto" and self.dt <= 0:
            raise ValueError("dt must be positive or 'auto'")
        ast = resolve_equation(self.equation, parameters=self.params)
        fluxes = conservation_form(ast)
        if fluxes is None:
            raise ValueError(f"{ast} is not in simulable conservation form")
        missing = sorted({f.symbol for f in fluxes if f.symbol and f.symbol not in self.params})
        if missing:
            raise ValueError(f"unbound parameter(s): {', '.join(missing)}")
        self._fluxes = fluxes
        return self

    @property
    def dx(self) -> float:
        return self.length / self.points

    @property
    def mu(self) -> float:
        if self.hyperviscosity is not None:
            return self.hyperviscosity
        return HYPERVISCOSITY_SCALE * self.dx**2

    @property
    def fluxes(self) -> list[tuple[float, int, int]]:
        """``(coefficient, derivative order, power)`` with parameters bound."""
        bound = []
        for flux in self._fluxes:
            value = float(flux.coefficient)
            if flux.symbol is not None:
                value *= self.params[flux.symbol]
            bound.append((value, flux.order, flux.power))
        return bound

    def grid(self) -> np.ndarray:
        return -self.length / 2 + self.dx * np.arange(self.points)

    def resolved_cfl(self) -> float:
        return self.cfl if self.cfl is not None else get_settings().cfl

    def resolved_blowup_factor(self) -> float:
        if self.blowup_factor is not None:
            return self.blowup_factor
        return get_settings().blowup_factor

    def resolved_mass_rtol(self) -> float:
        return self.mass_rtol if self.mass_rtol is not None else get_settings().mass_rtol


@dataclass
class SimState:
    t: float
    u: np.ndarray
    mass: float
    extrema: deque[tuple[float, float, float]] = field(
        default_factory=lambda: deque(maxlen=EXTREMA_HISTORY)
    )

    @classmethod
    def initial(cls, u: np.ndarray, dx: float, t: float = 0.0) -> SimState:
        values = np.asarray(u, dtype=float).copy()
        state = cls(t=t, u=values, mass=float(values.sum() * dx))
        state.record_extrema()
        return state

    def record_extrema(self) -> None:
        self.extrema.append((self.t, float(self.u.min()), float(self.u.max())))

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.u)))


class DetectedCompacton(WireModel):
    amplitude: float
    center: float
    half_width: float
    speed: float | None = None
    unresolved: bool = False


class CompactonInventory(WireModel):
    t: float = 0.0
    compactons: list[DetectedCompacton] = Field(default_factory=list)

    def __len__(self) -> int:
        return len(self.compactons)

    @property
    def resolved(self) -> list[DetectedCompacton]:
        return [c for c in self.compactons if not c.unresolved]


@dataclass
class Snapshot:
    t: float
    u: np.ndarray
    mass: float
    inventory: CompactonInventory | None = None


@dataclass
class SimTrace:
    x: np.ndarray
    dt: float  # smallest step taken
    snapshots: list[Snapshot] = field(default_factory=list)
    blew_up: bool = False
    message: str | None = None

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]

    def max_mass_drift(self) -> float:
        if not self.snapshots:
            return 0.0
        reference = self.snapshots[0].mass
        scale = abs(reference) if reference else 1.0
        return max(abs(s.mass - reference) / scale for s in self.snapshots)

    def diagnostics(self) -> RunDiagnostics:
        return RunDiagnostics(
            dt=self.dt,
            times=[s.t for s in self.snapshots],
            masses=[s.mass for s in self.snapshots],
            max_mass_drift=self.max_mass_drift(),
            inventories=[s.inventory for s in self.snapshots if s.inventory is not None],
            blew_up=self.blew_up,
            message=self.message,
        )


class RunDiagnostics(WireModel):
    """Per-run JSON summary: mass series, inventories and the blow-up flag."""

    dt: float
    times: list[float]
    masses: list[float]
    max_mass_drift: float
    inventories: list[CompactonInventory]
    blew_up: bool
    message: str | None = None


class BlowUpError(RuntimeError):
    """The field left the finite range; carries the last finite state and the partial trace."""

    def __init__(self, message: str, state: SimState, trace: SimTrace) -> None:
        super().__init__(message)
        self.state = state
        self.trace = trace
