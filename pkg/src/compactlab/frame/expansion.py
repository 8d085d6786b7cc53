"""Expansion of data in the dyadic frame and the square of an expansion."""

from __future__ import annotations

import csv
import io
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import model_validator
from scipy.integrate import trapezoid

from compactlab.config import get_settings
from compactlab.frame.elements import (
    FrameElement,
    KakPiece,
    cell_size,
    children,
    elements_in_window,
    refine,
)
from compactlab.wire import WireModel

logger = logging.getLogger(__name__)

ExpandMethod = Literal["greedy", "projection"]

SUPPORT_RTOL = 1e-12

Data = Callable[[np.ndarray], np.ndarray] | tuple[np.ndarray, np.ndarray]


class FrameCoefficient(WireModel):
    k: int
    j: int
    c: float


class FrameExpansion(WireModel):
    """Coefficients ``C[k, j]`` of ``sum C[k, j] eta(k, j)`` over ``j_min..j_max``."""

    j_min: int
    j_max: int
    terms: list[FrameCoefficient]
    window: tuple[float, float] | None = None
    method: ExpandMethod | None = None
    l2_error: float | None = None

    @model_validator(mode="after")
    def _check_terms(self) -> FrameExpansion:
        if self.j_max < self.j_min:
            raise ValueError(f"empty scale range [{self.j_min}, {self.j_max}]")
        seen: set[tuple[int, int]] = set()
        for term in self.terms:
            if not self.j_min <= term.j <= self.j_max:
                raise ValueError(f"term (k={term.k}, j={term.j}) outside the scale range")
            if (term.k, term.j) in seen:
                raise ValueError(f"duplicate term (k={term.k}, j={term.j})")
            seen.add((term.k, term.j))
        return self

    @classmethod
    def from_coefficients(
        cls, coefficients: dict[tuple[int, int], float], **kwargs
    ) -> FrameExpansion:
        if not coefficients:
            raise ValueError("an expansion needs at least one coefficient")
        scales = [j for _, j in coefficients]
        terms = [
            FrameCoefficient(k=k, j=j, c=c)
            for (k, j), c in sorted(coefficients.items(), key=lambda item: item[0][::-1])
        ]
        kwargs.setdefault("j_min", min(scales))
        kwargs.setdefault("j_max", max(scales))
        return cls(terms=terms, **kwargs)

    def coefficient(self, k: int, j: int) -> float:
        for term in self.terms:
            if term.k == k and term.j == j:
                return term.c
        return 0.0

    def nonzero(self, atol: float = 0.0) -> list[FrameCoefficient]:
        return [term for term in self.terms if abs(term.c) > atol]

    def reconstruct(self, x: np.ndarray | float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for term in self.terms:
            if term.c != 0.0:
                out += term.c * FrameElement(k=term.k, j=term.j)(x)
        return out

    def coefficients_json(self) -> list[dict[str, float]]:
        """The ``[{k, j, c}, ...]`` list written to expansion files."""
        return [term.model_dump() for term in self.terms]


def reconstruction_csv(expansion: FrameExpansion, x: np.ndarray) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", "u"])
    for xv, uv in zip(np.asarray(x, dtype=float), expansion.reconstruct(x), strict=True):
        writer.writerow([f"{xv:.17g}", f"{uv:.17g}"])
    return buffer.getvalue()


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    """Weights ``w`` with ``w @ f == trapezoid(f, x)``."""
    dx = np.diff(x)
    weights = np.zeros(len(x))
    weights[:-1] += dx / 2
    weights[1:] += dx / 2
    return weights


def _sample(
    data: Data,
    window: tuple[float, float] | None,
    finest: float,
    points_per_cell: int,
) -> tuple[np.ndarray, np.ndarray, tuple[float, float]]:
    if callable(data):
        if window is None:
            raise ValueError("a window is required when expanding a function")
        a, b = window
        if b <= a:
            raise ValueError(f"empty analysis window [{a}, {b}]")
        cells = math.ceil((b - a) / finest - 1e-9)
        x = np.linspace(a, b, cells * points_per_cell + 1)
        values = np.asarray(data(x), dtype=float)
        width = b - a
        outside = np.concatenate(
            [np.linspace(a - width, a, 257)[:-1], np.linspace(b, b + width, 257)[1:]]
        )
        spill = float(np.max(np.abs(np.asarray(data(outside), dtype=float))))
    else:
        x, values = (np.asarray(part, dtype=float) for part in data)
        if x.shape != values.shape or x.ndim != 1 or len(x) < 2:
            raise ValueError("gridded data needs matching one-dimensional x and values")
        if np.any(np.diff(x) <= 0):
            raise ValueError("grid must be increasing")
        if window is None:
            window = (float(x[0]), float(x[-1]))
        a, b = window
        inside = (x >= a) & (x <= b)
        spill = float(np.max(np.abs(values[~inside]), initial=0.0))
        x, values = x[inside], values[inside]
        if len(x) < 2 or float(np.max(np.diff(x))) > finest / 4:
            raise ValueError(f"grid too coarse for cells of size {finest:g}")
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    if spill > SUPPORT_RTOL * scale:
        raise ValueError(
            f"data support exceeds window [{window[0]:g}, {window[1]:g}] "
            f"(|u| = {spill:.3e} outside)"
        )
    return x, values, (float(window[0]), float(window[1]))


def expand(
    data: Data,
    j_min: int,
    j_max: int,
    *,
    window: tuple[float, float] | None = None,
    method: ExpandMethod = "projection",
    points_per_cell: int | None = None,
) -> FrameExpansion:
    """Expand ``data`` (a function or ``(x, values)`` samples) in ``eta(k, j)``.

    ``greedy`` sweeps the scales coarse to fine and fits each element against the
    running residual; same-scale elements are disjoint so each scale decouples.
    ``projection`` starts from the greedy coefficients and adds the minimum-norm
    least-squares correction over every element at once.
    """

    if j_max < j_min:
        raise ValueError(f"empty scale range [{j_min}, {j_max}]")
    if method not in ("greedy", "projection"):
        raise ValueError(f"unknown expansion method {method!r}")
    if points_per_cell is None:
        points_per_cell = get_settings().frame_points_per_cell
    x, values, window = _sample(data, window, cell_size(j_max), points_per_cell)

    elements = [e for j in range(j_min, j_max + 1) for e in elements_in_window(window, j)]
    if not elements:
        raise ValueError(f"no frame element fits in window [{window[0]:g}, {window[1]:g}]")
    basis = np.column_stack([element(x) for element in elements])

    residual = values.copy()
    coefficients = np.zeros(len(elements))
    for column in range(len(elements)):
        phi = basis[:, column]
        c = trapezoid(residual * phi, x) / trapezoid(phi * phi, x)
        residual -= c * phi
        coefficients[column] = c

    if method == "projection":
        root_weights = np.sqrt(trapezoid_weights(x))
        correction, *_ = np.linalg.lstsq(
            basis * root_weights[:, None], residual * root_weights, rcond=None
        )
        coefficients += correction
        residual = values - basis @ coefficients

    error = math.sqrt(trapezoid(residual * residual, x))
    logger.info(
        "Expanded on [%g, %g] over scales %s..%s with %s elements (%s): L2 error %.3e",
        window[0],
        window[1],
        j_min,
        j_max,
        len(elements),
        method,
        error,
    )
    return FrameExpansion(
        j_min=j_min,
        j_max=j_max,
        terms=[
            FrameCoefficient(k=e.k, j=e.j, c=float(c))
            for e, c in zip(elements, coefficients, strict=True)
        ],
        window=window,
        method=method,
        l2_error=error,
    )


class FrameBounds(WireModel):
    lower: float
    upper: float
    ratio: float
    elements: int


def frame_bounds(
    j_min: int,
    j_max: int,
    window: tuple[float, float],
    *,
    points_per_cell: int | None = None,
) -> FrameBounds:
    """Extreme eigenvalues of the Gram matrix of L2-normalized elements in ``window``."""

    if points_per_cell is None:
        points_per_cell = get_settings().frame_points_per_cell
    elements = [e for j in range(j_min, j_max + 1) for e in elements_in_window(window, j)]
    if not elements:
        raise ValueError("no frame element fits in the window")
    a, b = window
    cells = math.ceil((b - a) / cell_size(j_max) - 1e-9)
    x = np.linspace(a, b, cells * points_per_cell + 1)
    basis = np.column_stack([element(x) for element in elements])
    norms = np.sqrt(trapezoid(basis * basis, x, axis=0))
    basis /= norms
    gram = basis.T @ (basis * trapezoid_weights(x)[:, None])
    eigenvalues = np.linalg.eigvalsh(gram)
    lower, upper = float(eigenvalues[0]), float(eigenvalues[-1])
    return FrameBounds(
        lower=lower,
        upper=upper,
        ratio=upper / lower if lower > 0 else math.inf,
        elements=len(elements),
    )


@dataclass(frozen=True)
class ProductTerm:
    """``weight * left * right``; in cross terms ``left`` is a refined coarse piece."""

    weight: float
    left: FrameElement | KakPiece
    right: FrameElement

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.weight * self.left(x) * self.right(x)


@dataclass
class SquareExpansion:
    """``u**2`` as self terms ``C**2 eta**2`` plus overlapping cross terms."""

    terms: list[ProductTerm] = field(default_factory=list)
    candidates: dict[tuple[int, int, int], int] = field(default_factory=dict)

    @property
    def self_terms(self) -> list[ProductTerm]:
        return [term for term in self.terms if term.left == term.right]

    @property
    def cross_terms(self) -> list[ProductTerm]:
        return [term for term in self.terms if term.left != term.right]

    def evaluate(self, x: np.ndarray | float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for term in self.terms:
            out += term(x)
        return out

    __call__ = evaluate


def square_expand(expansion: FrameExpansion) -> SquareExpansion:
    """Expand ``(sum C eta)**2`` keeping only products of overlapping elements.

    Same-scale elements are disjoint, so the only cross terms pair a coarse element
    with one of its children at a finer scale. ``candidates[(k, j, j')]`` records how
    many scale-``j'`` partners a coarse element ``(k, j)`` can have, ``2**(j'-j)``.
    Before multiplying, the coarse factor is refined into compactons through the
    two-scale identity and only the pieces overlapping the child are kept, so each
    cross term is ``2 C C' piece * eta'``.
    """

    active = {(term.k, term.j): term.c for term in expansion.nonzero()}
    scales = sorted({j for _, j in active})
    square = SquareExpansion()
    for (k, j), c in sorted(active.items(), key=lambda item: item[0][::-1]):
        coarse = FrameElement(k=k, j=j)
        square.terms.append(ProductTerm(c * c, coarse, coarse))
        pieces = refine(coarse)
        for j_fine in (s for s in scales if s > j):
            partners = children(k, j, j_fine)
            square.candidates[(k, j, j_fine)] = len(partners)
            for k_fine in partners:
                c_fine = active.get((k_fine, j_fine))
                if c_fine is None:
                    continue
                fine = FrameElement(k=k_fine, j=j_fine)
                square.terms.extend(
                    ProductTerm(2.0 * c * c_fine, piece, fine)
                    for piece in pieces
                    if piece.overlaps(fine)
                )
    logger.debug(
        "square expansion: %s self terms, %s cross terms",
        len(square.self_terms),
        len(square.cross_terms),
    )
    return square
