"""Explicit RK4 time stepping of conservation-form equations on a periodic grid.

The spatial operator is written as the divergence of a discrete flux,
``u_t = -D1(sum(c * D_{d-1}(u^m))) - mu * D4(u)``, so the grid sum of ``u`` is
preserved to round-off by every stage.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence

import numpy as np

from compactlab.closed_forms.stencils import derivative_periodic
from compactlab.simulator.detect import detect_compactons, track
from compactlab.simulator.models import (
    BlowUpError,
    SimConfig,
    SimState,
    SimTrace,
    Snapshot,
)

logger = logging.getLogger(__name__)

Flux = tuple[float, int, int]

# fraction of the domain the support may cover before the seam warning
SEAM_FRACTION = 0.9
SUPPORT_LEVEL = 1e-3


def rhs(
    u: np.ndarray, dx: float, fluxes: Sequence[Flux], mu: float, order: int = 4
) -> np.ndarray:
    flux = np.zeros_like(u)
    for coefficient, derivative, power in fluxes:
        composite = u**power
        flux += coefficient * derivative_periodic(composite, dx, derivative - 1, order)
    out = -derivative_periodic(flux, dx, 1, order)
    if mu:
        out -= mu * derivative_periodic(u, dx, 4, order)
    return out


def auto_dt(u: np.ndarray, dx: float, fluxes: Sequence[Flux], cfl: float) -> float:
    """``cfl * dx^3 / max(1, max|flux'(u)|)``."""
    peak = float(np.max(np.abs(u))) if len(u) else 0.0
    speed = sum(abs(c) * m * peak ** (m - 1) for c, _, m in fluxes)
    return cfl * dx**3 / max(1.0, speed)


def rk4(fn: Callable[[np.ndarray], np.ndarray], u: np.ndarray, dt: float) -> np.ndarray:
    k1 = fn(u)
    k2 = fn(u + 0.5 * dt * k1)
    k3 = fn(u + 0.5 * dt * k2)
    k4 = fn(u + dt * k3)
    return u + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def step(state: SimState, config: SimConfig, dt: float | None = None) -> SimState:
    """Advance ``state`` by one RK4 step."""

    dx = config.dx
    fluxes = config.fluxes
    if dt is None:
        dt = config.dt if config.dt != "auto" else auto_dt(
            state.u, dx, fluxes, config.resolved_cfl()
        )
    u = rk4(lambda v: rhs(v, dx, fluxes, config.mu, config.scheme_order), state.u, dt)
    return SimState(t=state.t + dt, u=u, mass=float(u.sum() * dx), extrema=state.extrema)


def _support_fraction(u: np.ndarray) -> float:
    peak = float(np.max(np.abs(u)))
    if peak == 0:
        return 0.0
    return float(np.mean(np.abs(u) > SUPPORT_LEVEL * peak))


def _snapshot(state: SimState, config: SimConfig, x: np.ndarray, threshold: float) -> Snapshot:
    inventory = detect_compactons(x, state.u, threshold, t=state.t, length=config.length)
    return Snapshot(t=state.t, u=state.u.copy(), mass=state.mass, inventory=inventory)


def run(
    initial: np.ndarray,
    config: SimConfig,
    *,
    detect: bool = True,
) -> SimTrace:
    """Integrate ``initial`` to ``config.t_end``, keeping every ``output_stride``-th state.

    The final state is always kept and lands on ``t_end`` exactly. With ``dt="auto"`` the
    step is re-derived from the current field at every kept state, so a growing peak
    tightens it; the remaining interval is then split into equal steps. Raises
    :class:`BlowUpError` when the field becomes non-finite or exceeds ``blowup_factor``
    times the initial maximum.
    """

    x = config.grid()
    u0 = np.asarray(initial, dtype=float)
    if u0.shape != x.shape:
        raise ValueError(f"initial field has {u0.size} points, grid has {config.points}")
    if not np.all(np.isfinite(u0)):
        raise ValueError("initial field must be finite")

    fluxes = config.fluxes
    cfl = config.resolved_cfl()

    def plan(t: float, u: np.ndarray) -> tuple[float, int]:
        nominal = config.dt if config.dt != "auto" else auto_dt(u, config.dx, fluxes, cfl)
        remaining = config.t_end - t
        count = max(1, int(np.ceil(remaining / nominal - 1e-9)))
        return remaining / count, count

    dt, steps_left = plan(0.0, u0)
    initial_peak = float(np.max(np.abs(u0)))
    ceiling = config.resolved_blowup_factor() * max(initial_peak, np.finfo(float).tiny)
    mass_rtol = config.resolved_mass_rtol()
    threshold = (
        config.detect_threshold if config.detect_threshold is not None else 0.1 * initial_peak
    )

    logger.info(
        "Starting run: %s, N=%s, L=%s, dt=%.3g, steps=%s, mu=%.3g",
        config.equation,
        config.points,
        config.length,
        dt,
        steps_left,
        config.mu,
    )

    state = SimState.initial(u0, config.dx)
    trace = SimTrace(x=x, dt=dt)

    def keep(current: SimState) -> None:
        if detect and threshold > 0:
            snapshot = _snapshot(current, config, x, threshold)
            if trace.snapshots and trace.snapshots[-1].inventory is not None:
                elapsed = snapshot.t - trace.snapshots[-1].t
                snapshot.inventory = track(
                    trace.snapshots[-1].inventory, snapshot.inventory, elapsed, config.length
                )
        else:
            snapshot = Snapshot(t=current.t, u=current.u.copy(), mass=current.mass)
        trace.snapshots.append(snapshot)

    keep(state)
    mass0 = state.mass
    mass_scale = abs(mass0) if mass0 else 1.0
    seam_warned = False

    # times are base_t + n * dt since the last re-plan, so they do not accumulate round-off
    base_t, base_index = 0.0, 0
    index = 0
    while steps_left:
        index += 1
        steps_left -= 1
        new = step(state, config, dt)
        new.t = config.t_end if not steps_left else base_t + (index - base_index) * dt
        peak = float(np.max(np.abs(new.u))) if new.is_finite else float("inf")
        if peak > ceiling:
            message = (
                f"blow-up at t={new.t:.6g}: max|u|={peak:.3g} exceeds "
                f"{config.resolved_blowup_factor():g} x initial max {initial_peak:.3g}"
            )
            logger.error(message)
            trace.blew_up = True
            trace.message = message
            raise BlowUpError(message, state, trace)
        state = new
        if index % config.output_stride and steps_left:
            continue
        state.record_extrema()
        drift = abs(state.mass - mass0) / mass_scale
        if drift > mass_rtol:
            logger.warning("Mass drift %.3g at t=%.6g exceeds %.3g", drift, state.t, mass_rtol)
        if not seam_warned and _support_fraction(state.u) > SEAM_FRACTION:
            logger.warning(
                "Support covers more than %d%% of the periodic domain at t=%.6g",
                int(100 * SEAM_FRACTION),
                state.t,
            )
            seam_warned = True
        keep(state)
        if config.dt == "auto" and steps_left:
            replanned, count = plan(state.t, state.u)
            if count != steps_left:
                logger.debug(
                    "Step size %.3g -> %.3g at t=%.6g, %s steps left",
                    dt,
                    replanned,
                    state.t,
                    count,
                )
                dt, steps_left = replanned, count
                base_t, base_index = state.t, index
                trace.dt = min(trace.dt, dt)

    logger.info(
        "Finished run at t=%.6g with %s snapshots, max mass drift %.3g",
        state.t,
        len(trace.snapshots),
        trace.max_mass_drift(),
    )
    return trace
