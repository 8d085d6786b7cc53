"""Dyadic frame of compactons and kink-antikink pairs.

Scale ``j`` has cell size ``s = 2**-j``; larger ``j`` is finer. The element
``eta(k, j)`` lives on ``[k*s, (k+1)*s]``:

    ======  ===========================================================
    j <= 0  KAK with half-cell ramps and a plateau of length ``s - 1``
    j > 0   compacton lobe compressed into the cell
    ======  ===========================================================

so ``eta(k, 0)`` is the unit compacton and same-scale elements never overlap.

The two-scale identity is stated for :func:`kak_profile`, whose ramps have unit
width and whose neighbors overlap by one ramp. Summing shifted compactons then
telescopes into a KAK exactly::

    kak_profile(y, 1) == kak_profile(y, 0) + kak_profile(y - 1, 0)

:func:`dilated_kak` carries it to the physical axis at the ramp width of each
scale, and :func:`refine` applies it repeatedly to split a KAK element into
compactons.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

logger = logging.getLogger(__name__)

TWO_SCALE_POINTS = 10_000


def cell_size(j: int) -> float:
    return math.ldexp(1.0, -j)


def kak_profile(y: np.ndarray | float, flat: float = 0.0) -> np.ndarray:
    """Unit-ramp KAK: rise on ``[0, 1]``, plateau of length ``flat``, fall after it."""

    if flat < 0:
        raise ValueError(f"plateau length must be >= 0, got {flat}")
    y = np.asarray(y, dtype=float)
    rising = (y >= 0.0) & (y <= 1.0)
    plateau = (y > 1.0) & (y <= 1.0 + flat)
    falling = (y > 1.0 + flat) & (y <= 2.0 + flat)
    out = np.zeros(y.shape)
    out[rising] = np.sin(0.5 * math.pi * y[rising]) ** 2
    out[plateau] = 1.0
    out[falling] = np.sin(0.5 * math.pi * (y[falling] - flat)) ** 2
    return out


class FrameElement(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    j: int

    @property
    def scale(self) -> float:
        return cell_size(self.j)

    @property
    def support(self) -> tuple[float, float]:
        s = self.scale
        return self.k * s, (self.k + 1) * s

    @property
    def flat_length(self) -> float:
        return max(self.scale - 1.0, 0.0)

    def overlaps(self, other: FrameElement) -> bool:
        """True when the open supports intersect."""
        lo = max(self.support[0], other.support[0])
        hi = min(self.support[1], other.support[1])
        return lo < hi

    def __call__(self, x: np.ndarray | float) -> np.ndarray:
        return eta_eval(self, x)


def ramp_width(j: int) -> float:
    """Physical length of one ramp of a scale-``j`` element: half a cell, at most 1/2."""
    return 0.5 * min(cell_size(j), 1.0)


def dilated_kak(
    x: np.ndarray | float, j: int, offset: float, flat: float = 0.0
) -> np.ndarray:
    """:func:`kak_profile` dilated to the ramp width of scale ``j``.

    ``offset`` and ``flat`` are counted in ramps, so ``dilated_kak(x, j, m)`` is the
    compacton on ``[m r, (m + 2) r]``.
    """

    return kak_profile(np.asarray(x, dtype=float) / ramp_width(j) - offset, flat)


def eta_eval(elem: FrameElement, x: np.ndarray | float) -> np.ndarray:
    """Peak-one profile of ``elem``; exactly zero outside its support."""

    ramp = ramp_width(elem.j)
    return dilated_kak(x, elem.j, elem.support[0] / ramp, elem.flat_length / ramp)


class KakPiece(BaseModel):
    """Compacton at the ramp width of scale ``j``, starting ``offset`` ramps from 0.

    Pieces with odd ``offset`` coincide with no frame element; they appear when a KAK is
    refined through the two-scale identity.
    """

    model_config = ConfigDict(frozen=True)

    j: int
    offset: int

    @property
    def support(self) -> tuple[float, float]:
        ramp = ramp_width(self.j)
        return self.offset * ramp, (self.offset + 2) * ramp

    def overlaps(self, other: FrameElement | KakPiece) -> bool:
        lo = max(self.support[0], other.support[0])
        hi = min(self.support[1], other.support[1])
        return lo < hi

    def __call__(self, x: np.ndarray | float) -> np.ndarray:
        return dilated_kak(x, self.j, self.offset)


def refine(elem: FrameElement) -> list[KakPiece]:
    """Compactons summing to ``elem``, by telescoping the two-scale identity.

    ``kak(y, m) == kak(y, m - 1) + kak(y - m, 0)`` peels one compacton off the far
    end of a plateau ``m`` ramps long, so a KAK with an ``m``-ramp plateau is the sum
    of ``m + 1`` compactons one ramp apart. A compacton element refines to itself.
    """

    ramp = ramp_width(elem.j)
    start = round(elem.support[0] / ramp)
    plateau = round(elem.flat_length / ramp)
    return [KakPiece(j=elem.j, offset=start + i) for i in range(plateau + 1)]


def fine_index(k: int, digits: Sequence[int]) -> int:
    """Index of the finer cell reached from ``k`` by halving along binary ``digits``.

    Digit ``0`` keeps the left half and ``1`` the right half, so ``len(digits)``
    halvings land ``len(digits)`` scales below ``k``.
    """

    index = k
    for digit in digits:
        if digit not in (0, 1):
            raise ValueError(f"binary digit expected, got {digit!r}")
        index = 2 * index + digit
    return index


def children(k: int, j: int, j_fine: int) -> list[int]:
    """Scale-``j_fine`` indices whose cells lie inside cell ``(k, j)``."""

    if j_fine < j:
        raise ValueError(
            f"children need a finer scale: j'={j_fine} < j={j}; swap the two elements"
        )
    depth = j_fine - j
    return [fine_index(k, digits) for digits in itertools.product((0, 1), repeat=depth)]


def elements_in_window(window: tuple[float, float], j: int) -> list[FrameElement]:
    """Scale-``j`` elements whose support lies inside ``window``."""

    a, b = window
    s = cell_size(j)
    first = math.ceil(a / s - 1e-9)
    last = math.floor(b / s + 1e-9) - 1
    return [FrameElement(k=k, j=j) for k in range(first, last + 1)]


def two_scale_check(
    j: int, k: int, *, shift: int = 1, points: int = TWO_SCALE_POINTS
) -> float:
    """Largest pointwise defect of the two-scale identity at scale ``j``, cell ``k``.

    The KAK with a one-ramp plateau starting at ``x = k * s`` is written directly in
    physical coordinates and compared with the sum of two dilated compactons from
    :func:`dilated_kak`, ``shift`` ramps apart. The samples cover the KAK support
    with margin on the physical grid. ``shift=1`` is the identity; any other shift,
    or a compacton dilated or translated differently from the frame, leaves an
    order-one defect.
    """

    ramp = ramp_width(j)
    start = k * cell_size(j)
    offset = round(start / ramp)
    x = np.linspace(start - 0.5 * ramp, start + 3.5 * ramp, points)
    kak = kak_profile((x - start) / ramp, 1.0)
    pair = dilated_kak(x, j, offset) + dilated_kak(x, j, offset + shift)
    worst = float(np.max(np.abs(kak - pair)))
    logger.debug("two-scale defect j=%s k=%s shift=%s: %.3e", j, k, shift, worst)
    return worst


def partition_defect(
    j: int, k_range: tuple[int, int], *, points: int = TWO_SCALE_POINTS
) -> float:
    """Distance from 1 of ``sum_k dilated_kak(x, j, k)`` where the sum is fully covered.

    With ``k`` running over ``k_range`` (inclusive) every point of
    ``[(k0 + 1) r, (k1 + 1) r]``, ``r`` the ramp width, sees a falling and a rising
    ramp that add to one.
    """

    k0, k1 = k_range
    if k1 <= k0:
        raise ValueError("partition needs at least two overlapping elements")
    ramp = ramp_width(j)
    x = np.linspace((k0 + 1) * ramp, (k1 + 1) * ramp, points)
    total = sum(dilated_kak(x, j, k) for k in range(k0, k1 + 1))
    return float(np.max(np.abs(total - 1.0)))
