"""Positive width roots of a similarity relation at bound amplitude and velocity."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from functools import reduce
from typing import Literal

import numpy as np
from scipy.optimize import bisect

from compactlab.config import get_settings
from compactlab.similarity.display import width_text
from compactlab.similarity.relation import (
    Branch,
    BoundRelation,
    SimilarityRelation,
    default_branch,
    format_branch,
)

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-10
DOUBLE_ROOT_TOLERANCE = 1e-12

SolveMethod = Literal["closed_form", "scan", "degenerate"]


@dataclass(frozen=True)
class WidthSolution:
    branch: Branch
    roots: tuple[float, ...]
    method: SolveMethod
    closed_form: str | None = None
    double_root: bool = False
    rejected: tuple[float, ...] = field(default=(), compare=False)

    @property
    def branch_text(self) -> str:
        return format_branch(self.branch)


def scan_roots(
    fn: Callable[[np.ndarray], np.ndarray],
    lower: float | None = None,
    upper: float | None = None,
    points: int | None = None,
    rtol: float | None = None,
) -> list[float]:
    """Bracket sign changes of ``fn`` on a log-spaced grid and bisect each bracket.

    ``fn`` must accept numpy arrays. Roots are returned sorted ascending.
    """

    settings = get_settings()
    lower = settings.root_scan_min if lower is None else lower
    upper = settings.root_scan_max if upper is None else upper
    points = settings.root_scan_points if points is None else points
    rtol = settings.root_rtol if rtol is None else rtol
    if not 0 < lower < upper:
        raise ValueError("scan interval must satisfy 0 < lower < upper")

    grid = np.logspace(math.log10(lower), math.log10(upper), points)
    values = np.asarray(fn(grid), dtype=float)

    def scalar(x: float) -> float:
        return float(np.asarray(fn(np.array([x])))[0])

    roots: list[float] = [float(x) for x, value in zip(grid, values, strict=True) if value == 0.0]
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
    for index in changes:
        roots.append(
            bisect(scalar, grid[index], grid[index + 1], xtol=1e-300, rtol=rtol, maxiter=400)
        )
    return sorted(roots)


def _quadratic(a: float, b: float, c: float) -> tuple[list[float], bool]:
    """Real roots of ``a y^2 + b y + c`` and whether they form a double root."""
    if a == 0.0:
        if b == 0.0:
            return [], False
        return [-c / b], False
    discriminant = b * b - 4.0 * a * c
    if abs(discriminant) <= DOUBLE_ROOT_TOLERANCE * max(b * b, abs(4.0 * a * c)):
        return [-b / (2.0 * a)], True
    if discriminant < 0.0:
        return [], False
    q = -0.5 * (b + math.copysign(math.sqrt(discriminant), b))
    roots = [q / a]
    if q != 0.0:
        roots.append(c / q)
    return roots, False


def _closed_form_power(rel: SimilarityRelation) -> int | None:
    """g when the relation is at most quadratic in ``L^g`` for g in {1, 2}."""
    nonzero = [e for e in rel.l_exponents if e]
    if not nonzero:
        return None
    g = reduce(math.gcd, nonzero)
    if g in (1, 2) and max(nonzero) // g <= 2:
        return g
    return None


def _verified(
    bound: BoundRelation, amplitude: float, velocity: float, branch: Branch, roots: list[float]
) -> tuple[list[float], list[float]]:
    kept: list[float] = []
    rejected: list[float] = []
    for root in roots:
        terms = bound.terms(amplitude, velocity, root, branch)
        scale = float(np.max(np.abs(terms))) if terms.size else 0.0
        if abs(float(np.sum(terms))) <= RESIDUAL_TOLERANCE * scale:
            kept.append(root)
        else:
            rejected.append(root)
    return kept, rejected


def solve_width(
    rel: SimilarityRelation,
    amplitude: float,
    velocity: float,
    branch: Branch | None = None,
    *,
    params: Mapping[str, float] | None = None,
    bound: BoundRelation | None = None,
    warn: bool = True,
) -> WidthSolution:
    """All positive widths satisfying the relation on one sign branch.

    A closed form is used when the relation is at most quadratic in ``L`` or ``L^2``;
    otherwise roots come from :func:`scan_roots`. Every root is checked against the
    relation before it is returned.
    """

    branch = default_branch(rel) if branch is None else branch
    bound = rel.bind(params) if bound is None else bound
    if rel.is_degenerate:
        if warn:
            logger.warning("Relation does not constrain L on branch %s", format_branch(branch))
        return WidthSolution(branch, (), "degenerate", width_text(rel, branch))

    polynomial = bound.polynomial(amplitude, velocity, branch)
    g = _closed_form_power(rel)
    double_root = False
    method: SolveMethod
    if g is not None:
        method = "closed_form"
        candidates, double_root = _quadratic(
            polynomial.get(2 * g, 0.0), polynomial.get(g, 0.0), polynomial.get(0, 0.0)
        )
        roots = sorted(y ** (1.0 / g) for y in candidates if y > 0.0)
    else:
        method = "scan"
        exponents = np.array(sorted(polynomial), dtype=float)
        weights = np.array([polynomial[int(e)] for e in exponents])

        def fn(widths: np.ndarray) -> np.ndarray:
            return np.sum(weights[:, None] * widths[None, :] ** exponents[:, None], axis=0)

        roots = scan_roots(fn)

    kept, rejected = _verified(bound, amplitude, velocity, branch, roots)
    if rejected:
        logger.warning("Dropped %s width root(s) failing the residual check", len(rejected))
    if not kept and warn:
        logger.warning(
            "No positive width root on branch %s at A=%s V=%s",
            format_branch(branch),
            amplitude,
            velocity,
        )
    closed_form = width_text(rel, branch) if method == "closed_form" else None
    return WidthSolution(
        branch=branch,
        roots=tuple(kept),
        method=method,
        closed_form=closed_form,
        double_root=double_root and bool(kept),
        rejected=tuple(rejected),
    )
