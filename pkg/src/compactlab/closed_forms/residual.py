"""Finite-difference PDE residual of a closed-form wave.

Every term is evaluated the way the equation writes it: inner atoms are differentiated
first, multiplied into the composite, and only then is the outer derivative applied.
For K(2,2) this differentiates ``u^2`` as a unit, which is smooth where ``u`` itself
has a kink at the compacton edge. Time derivatives use the same central stencil in t
with step ``dx``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence

import numpy as np
from pydantic import BaseModel

from compactlab.closed_forms import stencils
from compactlab.closed_forms.waves import TravelingWave, sample_grid
from compactlab.dsl.ast import EquationAST, Term

logger = logging.getLogger(__name__)

DEFAULT_DX = 1e-3
POINTS_PER_HALF_WIDTH = 64


class ResidualReport(BaseModel):
    max_abs: float
    interior_max_abs: float
    dx: float
    scheme_order: int
    points: int
    interior_points: int


def _coefficient(term: Term, params: Mapping[str, float]) -> float:
    value = float(term.coefficient)
    if term.symbol is not None:
        if term.symbol not in params:
            raise ValueError(f"unbound parameter(s): {term.symbol}")
        value *= params[term.symbol]
    return value


def _term_reach(term: Term, order: int) -> int:
    inner = max((stencils.half_width(atom.x_order, order) for atom in term.atoms), default=0)
    return inner + stencils.half_width(term.outer_x_order, order)


def _same(values: np.ndarray, dx: float, derivative: int, order: int) -> np.ndarray:
    """Derivative aligned with ``values``; points without a full stencil are NaN."""
    reach = stencils.half_width(derivative, order)
    out = np.full(values.shape, np.nan)
    out[reach : len(values) - reach] = stencils.derivative_valid(values, dx, derivative, order)
    return out


def _uniform_grid(
    wave: TravelingWave, grid: Sequence[float] | np.ndarray | None, dx: float | None, t: float
) -> tuple[np.ndarray, float]:
    if grid is None:
        step = DEFAULT_DX if dx is None else dx
        if step <= 0:
            raise ValueError("dx must be positive")
        bounds = sample_grid(wave, t, 2)
        count = int(math.floor((bounds[1] - bounds[0]) / step)) + 1
        return bounds[0] + step * np.arange(count), step
    points = np.asarray(grid, dtype=float)
    if points.ndim != 1 or len(points) < 2:
        raise ValueError("grid must be a one-dimensional array of at least two points")
    step = float(points[1] - points[0])
    if step <= 0 or not np.allclose(np.diff(points), step, rtol=1e-9, atol=0.0):
        raise ValueError("grid must be uniform and increasing")
    return points, step


def residual(
    wave: TravelingWave,
    ast: EquationAST,
    grid: Sequence[float] | np.ndarray | None = None,
    *,
    dx: float | None = None,
    scheme_order: int = 4,
    t: float = 0.0,
    params: Mapping[str, float] | None = None,
) -> ResidualReport:
    """Maximum absolute residual of ``ast`` evaluated on ``wave``.

    ``interior_max_abs`` leaves out every point within two stencil widths (plus the
    distance the time stencil moves a breakpoint) of a breakpoint of the piecewise
    definition.
    """

    params = params or {}
    points, dx = _uniform_grid(wave, grid, dx, t)
    time_weights = stencils.weights(1, scheme_order)
    if any(atom.t_order > 1 for term in ast.terms for atom in term.atoms):
        raise ValueError("residual supports at most one time derivative per factor")

    pad = max(_term_reach(term, scheme_order) for term in ast.terms)
    n = len(points)
    extended = points[0] + dx * np.arange(-pad, n + pad)

    time_reach = len(time_weights) // 2
    fields: dict[int, np.ndarray] = {}

    def field(shift: int) -> np.ndarray:
        if shift not in fields:
            fields[shift] = wave.evaluate(extended, t + shift * dx)
        return fields[shift]

    def time_derivative() -> np.ndarray:
        return sum(
            weight * field(i - time_reach) for i, weight in enumerate(time_weights) if weight
        ) / dx

    total = np.zeros(n)
    needs_time = False
    for term in ast.terms:
        if term.transcendental is not None:
            inner = np.sin(field(0)) if term.transcendental == "sin" else np.cos(field(0))
        else:
            inner = np.ones_like(extended)
            for atom in term.atoms:
                if atom.t_order:
                    needs_time = True
                    base = time_derivative()
                else:
                    base = field(0)
                if atom.x_order:
                    base = _same(base, dx, atom.x_order, scheme_order)
                inner = inner * base**atom.power
        values = _coefficient(term, params) * inner
        if term.outer_x_order:
            values = _same(values, dx, term.outer_x_order, scheme_order)
        total += values[pad : pad + n]

    breaks = sorted(wave.breakpoints(t))
    reach = 2 * (2 * pad + 1) * dx
    if needs_time:
        speeds = [abs(wave.velocity), abs(wave.secondary_velocity or 0.0)]
        reach += time_reach * dx * max(speeds)
    gaps = [b - a for a, b in zip(breaks, breaks[1:]) if b - a > 1e-12]
    if gaps and min(gaps) < (2 * pad + 1) * dx:
        raise ValueError(
            f"grid too coarse: stencil of {2 * pad + 1} points at dx={dx} "
            f"is wider than a piece of length {min(gaps):.3g}"
        )
    if dx > wave.half_width / POINTS_PER_HALF_WIDTH:
        logger.warning(
            "dx=%s resolves the half-width %s with fewer than %s points",
            dx,
            wave.half_width,
            POINTS_PER_HALF_WIDTH,
        )

    interior = np.ones(n, dtype=bool)
    for point in breaks:
        interior &= np.abs(points - point) > reach
    if not interior.any():
        raise ValueError("grid too coarse: no point lies away from the breakpoints")

    magnitude = np.abs(total)
    report = ResidualReport(
        max_abs=float(np.max(magnitude)),
        interior_max_abs=float(np.max(magnitude[interior])),
        dx=dx,
        scheme_order=scheme_order,
        points=n,
        interior_points=int(interior.sum()),
    )
    logger.debug(
        "Residual of %s on %s: max=%s interior=%s",
        wave.family,
        ast,
        report.max_abs,
        report.interior_max_abs,
    )
    return report


def residual_convergence(
    wave: TravelingWave,
    ast: EquationAST,
    dxs: Sequence[float],
    *,
    scheme_order: int = 4,
    t: float = 0.0,
    params: Mapping[str, float] | None = None,
) -> list[ResidualReport]:
    """Residual reports for a sequence of grid spacings."""
    return [
        residual(wave, ast, dx=dx, scheme_order=scheme_order, t=t, params=params) for dx in dxs
    ]


def observed_orders(reports: Sequence[ResidualReport]) -> list[float]:
    """``log(e1/e2)/log(dx1/dx2)`` for consecutive interior residuals."""

    orders = []
    for coarse, fine in zip(reports, reports[1:]):
        ratio = coarse.interior_max_abs / fine.interior_max_abs
        orders.append(math.log(ratio) / math.log(coarse.dx / fine.dx))
    return orders
