"""Width curves over amplitude/velocity grids.

Sweeps partition by amplitude across worker processes and merge results in input order,
so the table is identical for any ``jobs`` value.
"""

from __future__ import annotations

import csv
import io
import logging
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from compactlab.config import get_settings
from compactlab.similarity.relation import Branch, SimilarityRelation, branches, format_branch
from compactlab.similarity.solve import solve_width

logger = logging.getLogger(__name__)

NO_ROOT = "none"


@dataclass(frozen=True)
class CurvePoint:
    amplitude: float
    velocity: float
    branch: Branch
    roots: tuple[float, ...]


@dataclass(frozen=True)
class CurveTable:
    points: tuple[CurvePoint, ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def max_roots(self) -> int:
        return max((len(point.roots) for point in self.points), default=0)

    def for_branch(self, branch: Branch) -> list[CurvePoint]:
        return [point for point in self.points if point.branch == branch]

    def to_csv(self) -> str:
        """``A,V,branch,L1,L2,...``; a point without roots carries ``none`` in L1."""
        width = max(self.max_roots, 1)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["A", "V", "branch", *(f"L{i + 1}" for i in range(width))])
        for point in self.points:
            roots = [f"{root:.17g}" for root in point.roots] or [NO_ROOT]
            roots += [""] * (width - len(roots))
            writer.writerow(
                [f"{point.amplitude:.17g}", f"{point.velocity:.17g}", format_branch(point.branch)]
                + roots
            )
        return buffer.getvalue()


def _solve_row(
    rel: SimilarityRelation,
    amplitude: float,
    velocities: Sequence[float],
    branch_list: Sequence[Branch],
    params: Mapping[str, float],
) -> list[CurvePoint]:
    bound = rel.bind(params)
    points = []
    for velocity in velocities:
        for branch in branch_list:
            solution = solve_width(
                rel, amplitude, float(velocity), branch, bound=bound, warn=False
            )
            points.append(CurvePoint(amplitude, float(velocity), branch, solution.roots))
    return points


def _run_rows(
    rel: SimilarityRelation,
    rows: list[tuple[float, list[float]]],
    branch_list: list[Branch],
    params: Mapping[str, float],
    jobs: int,
) -> CurveTable:
    if jobs <= 1 or len(rows) <= 1:
        chunks = [_solve_row(rel, a, vs, branch_list, params) for a, vs in rows]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_solve_row, rel, a, vs, branch_list, dict(params)) for a, vs in rows
            ]
            chunks = [future.result() for future in futures]
    table = CurveTable(tuple(point for chunk in chunks for point in chunk))
    empty = sum(1 for point in table.points if not point.roots)
    logger.info("Swept %s points (%s without a root) with %s job(s)", len(table), empty, jobs)
    return table


def sweep(
    rel: SimilarityRelation,
    amplitudes: Sequence[float],
    velocity_range: tuple[float, float],
    samples: int,
    *,
    branch_list: Sequence[Branch] | None = None,
    params: Mapping[str, float] | None = None,
    jobs: int | None = None,
) -> CurveTable:
    """Widths for every amplitude over ``samples`` evenly spaced velocities."""

    if samples < 1:
        raise ValueError("samples must be positive")
    if any(a <= 0 for a in amplitudes):
        raise ValueError("amplitudes must be positive")
    velocities = np.linspace(velocity_range[0], velocity_range[1], samples).tolist()
    chosen = list(branch_list) if branch_list is not None else branches(rel)
    rows = [(float(a), velocities) for a in amplitudes]
    return _run_rows(rel, rows, chosen, params or {}, jobs or get_settings().jobs)


def sweep_law(
    rel: SimilarityRelation,
    amplitudes: Sequence[float],
    alpha: float = 1.0,
    power: int = 1,
    *,
    branch_list: Sequence[Branch] | None = None,
    params: Mapping[str, float] | None = None,
    jobs: int | None = None,
) -> CurveTable:
    """Widths along the velocity law ``V = alpha * A^power``."""

    if any(a <= 0 for a in amplitudes):
        raise ValueError("amplitudes must be positive")
    chosen = list(branch_list) if branch_list is not None else branches(rel)
    rows = [(float(a), [alpha * float(a) ** power]) for a in amplitudes]
    return _run_rows(rel, rows, chosen, params or {}, jobs or get_settings().jobs)


@dataclass(frozen=True)
class Crossing:
    amplitude: float
    branch: Branch
    root_index: int
    velocity: float


def level_crossings(table: CurveTable, level: float) -> list[Crossing]:
    """Velocities where a width root crosses ``level``, by linear interpolation.

    Consecutive points of the same (A, branch) curve are compared root by root, so only
    curves whose root count does not change between the two points are used.
    """

    curves: dict[tuple[float, Branch], list[CurvePoint]] = {}
    for point in table.points:
        curves.setdefault((point.amplitude, point.branch), []).append(point)

    crossings: list[Crossing] = []
    for (amplitude, branch), points in curves.items():
        for left, right in zip(points, points[1:]):
            if len(left.roots) != len(right.roots):
                continue
            for index, (l0, l1) in enumerate(zip(left.roots, right.roots, strict=True)):
                d0, d1 = l0 - level, l1 - level
                if d0 == 0.0:
                    crossings.append(Crossing(amplitude, branch, index, left.velocity))
                elif d0 * d1 < 0.0:
                    fraction = d0 / (d0 - d1)
                    velocity = left.velocity + fraction * (right.velocity - left.velocity)
                    crossings.append(Crossing(amplitude, branch, index, velocity))
    return crossings
