"""Closed-form traveling solutions and their evaluation.

All profiles are written in the co-moving coordinate ``xi = x - V t``. The K(2,2)
kink-antikink pair joins the two halves of a compacton lobe with a plateau:

    ===========================  ====================================
    xi range                     value
    ===========================  ====================================
    -2*pi <= xi <= 0             (4V/3) cos^2(xi/4)         rising ramp
    0 <= xi <= lambda            4V/3                       plateau
    lambda <= xi <= lambda+2*pi  (4V/3) cos^2((xi-lambda)/4) falling ramp
    ===========================  ====================================

so ``lambda = 0`` reproduces the compacton exactly. The K(2,2) compound puts a faster
offset compacton on the plateau; see :mod:`compactlab.closed_forms.compound`.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from typing import Literal

import numpy as np
from pydantic import ConfigDict, Field, model_validator

from compactlab.wire import WireModel

logger = logging.getLogger(__name__)

WaveFamily = Literal[
    "KdVSech2",
    "MKdVSech",
    "MKdVExotic",
    "K22Compacton",
    "K22KAK",
    "K22CompOnKAK",
    "K22OffsetCompacton",
    "KnnCompacton",
]

COMPACT_FAMILIES: frozenset[str] = frozenset(
    {"K22Compacton", "K22KAK", "K22CompOnKAK", "KnnCompacton"}
)

K22_HALF_WIDTH = 4.0
K22_LOBE = 2 * math.pi

_REL_TOL = 1e-9


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=_REL_TOL, abs_tol=1e-12)


def support_indicator(x: np.ndarray | float) -> np.ndarray:
    """1 where ``|x| <= 1`` and 0 elsewhere."""
    return (np.abs(np.asarray(x, dtype=float)) <= 1.0).astype(float)


def _lobe(xi: np.ndarray, amplitude: float) -> np.ndarray:
    """K(2,2) compacton lobe ``A cos^2(xi/4)`` on ``|xi| <= 2*pi``."""
    inside = np.abs(xi) <= K22_LOBE
    return np.where(inside, amplitude * np.cos(xi / K22_HALF_WIDTH) ** 2, 0.0)


class TravelingWave(WireModel):
    """A closed-form traveling solution, serialized with its short field names."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    family: WaveFamily
    amplitude: float = Field(alias="A")
    velocity: float = Field(alias="V")
    flat_length: float | None = Field(default=None, alias="lambda", ge=0)
    offset: float | None = Field(default=None, alias="delta")
    secondary_velocity: float | None = Field(default=None, alias="Vprime")
    order: int | None = Field(default=None, alias="n")

    @model_validator(mode="after")
    def _family_invariants(self) -> TravelingWave:
        a, v = self.amplitude, self.velocity
        family = self.family
        if family == "KdVSech2":
            if a <= 0 or not _close(v, 2 * a):
                raise ValueError("KdVSech2 needs A > 0 and V = 2A")
        elif family == "MKdVSech":
            if v <= 0 or not _close(a, math.sqrt(v)):
                raise ValueError("MKdVSech needs V > 0 and A = sqrt(V)")
        elif family == "MKdVExotic":
            if v <= 0 or not _close(a, math.sqrt(8 * v)):
                raise ValueError("MKdVExotic needs V = 4k^2 > 0 and A = sqrt(32)*k")
        elif family in ("K22Compacton", "K22KAK", "K22CompOnKAK"):
            if v <= 0 or not _close(a, 4 * v / 3):
                raise ValueError(f"{family} needs V > 0 and A = 4V/3")
            if family != "K22Compacton" and self.flat_length is None:
                raise ValueError(f"{family} needs a flat length lambda")
            if family == "K22CompOnKAK":
                self._check_compound()
        elif family == "K22OffsetCompacton":
            if self.offset is None:
                raise ValueError("K22OffsetCompacton needs an offset delta")
            if not _close(v, 0.75 * (2 * self.offset + a)):
                raise ValueError("K22OffsetCompacton needs V = (3/4)(2*delta + A)")
        elif family == "KnnCompacton":
            n = self.order
            if n is None or n < 2:
                raise ValueError("KnnCompacton needs an order n >= 2")
            if v <= 0 or not _close(a, 2 * v * n / (n + 1)):
                raise ValueError("KnnCompacton needs V > 0 and A = 2Vn/(n+1)")
        return self

    def _check_compound(self) -> None:
        if self.offset is None or self.secondary_velocity is None:
            raise ValueError("K22CompOnKAK needs delta and Vprime")
        if self.offset < 0:
            raise ValueError("top compacton must start on the plateau (delta >= 0)")
        if self.offset + 2 * K22_LOBE > self.flat_length + 1e-12 * max(1.0, self.flat_length):
            raise ValueError("top compacton does not fit on the plateau (delta + 4*pi > lambda)")
        if self.secondary_velocity <= self.velocity:
            raise ValueError("compound window is empty (Vprime <= V)")
        if self.top_amplitude <= 0:
            raise ValueError("top compacton needs Vprime > 2V")

    # --- derived quantities -------------------------------------------------

    @property
    def wavenumber(self) -> float:
        """k of the exotic MKdV solution, ``V = 4 k^2``."""
        return math.sqrt(self.velocity) / 2

    @property
    def top_amplitude(self) -> float:
        """Height of the compound's top compacton above the plateau."""
        if self.secondary_velocity is None:
            return 0.0
        return 4 * (self.secondary_velocity - 2 * self.velocity) / 3

    @property
    def half_widths(self) -> tuple[float, ...]:
        family = self.family
        if family == "KdVSech2":
            return (math.sqrt(2 / self.amplitude),)
        if family == "MKdVSech":
            return (1 / self.amplitude,)
        if family == "MKdVExotic":
            k = self.wavenumber
            return (5 * math.pi / (6 * k), math.pi / (6 * k))
        if family == "KnnCompacton":
            return (2 * self.order / (self.order - 1),)
        return (K22_HALF_WIDTH,)

    @property
    def half_width(self) -> float:
        return self.half_widths[0]

    @property
    def is_compact(self) -> bool:
        return self.family in COMPACT_FAMILIES

    def window(self) -> tuple[float, float] | None:
        """Time interval during which the compound's top compacton stays on the plateau."""
        if self.family != "K22CompOnKAK":
            return None
        end = (self.flat_length - 2 * K22_LOBE - self.offset) / (
            self.secondary_velocity - self.velocity
        )
        return (0.0, end)

    def support(self, t: float = 0.0) -> tuple[float, float] | None:
        """Interval covering every lobe; compact families vanish outside it."""
        shift = self.velocity * t
        if self.family in ("K22Compacton", "K22OffsetCompacton"):
            return (shift - K22_LOBE, shift + K22_LOBE)
        if self.family == "K22KAK":
            return (shift - K22_LOBE, shift + self.flat_length + K22_LOBE)
        if self.family == "K22CompOnKAK":
            top_end = self.secondary_velocity * t + self.offset + 2 * K22_LOBE
            return (shift - K22_LOBE, max(shift + self.flat_length + K22_LOBE, top_end))
        if self.family == "KnnCompacton":
            reach = self.half_width * math.pi / 2
            return (shift - reach, shift + reach)
        return None

    def breakpoints(self, t: float = 0.0) -> list[float]:
        """Positions in x where the piecewise definition switches branch."""
        shift = self.velocity * t
        family = self.family
        if family in ("K22Compacton", "K22OffsetCompacton", "KnnCompacton"):
            lo, hi = self.support(t)
            return [lo, hi]
        if family in ("K22KAK", "K22CompOnKAK"):
            points = [
                shift - K22_LOBE,
                shift,
                shift + self.flat_length,
                shift + self.flat_length + K22_LOBE,
            ]
            if family == "K22CompOnKAK":
                start = self.secondary_velocity * t + self.offset
                points += [start, start + 2 * K22_LOBE]
            return sorted(points)
        return []

    # --- evaluation ----------------------------------------------------------

    def evaluate(self, x: np.ndarray | float, t: float = 0.0) -> np.ndarray:
        """Exact piecewise value at positions ``x`` and time ``t``."""

        x = np.asarray(x, dtype=float)
        xi = x - self.velocity * t
        a = self.amplitude
        family = self.family
        if family == "KdVSech2":
            return a / np.cosh(xi / self.half_width) ** 2
        if family == "MKdVSech":
            return a / np.cosh(xi / self.half_width)
        if family == "MKdVExotic":
            c = np.cos(self.wavenumber * xi) ** 2
            return a * c / (3 * (1 - 2 * c / 3))
        if family == "K22Compacton":
            return _lobe(xi, a)
        if family == "K22OffsetCompacton":
            return _lobe(xi, a) + self.offset
        if family == "KnnCompacton":
            scaled = xi / self.half_width
            inside = np.abs(scaled) <= math.pi / 2
            base = np.where(inside, a * np.cos(scaled) ** 2, 0.0)
            return base ** (1 / (self.order - 1))
        kak = self._kak(xi)
        if family == "K22KAK":
            return kak
        window = self.window()
        if window is not None and not window[0] <= t <= window[1]:
            logger.warning(
                "Compound evaluated at t=%s outside its validity window (%s, %s)",
                t,
                window[0],
                window[1],
            )
        centered = x - self.secondary_velocity * t - self.offset - K22_LOBE
        return kak + _lobe(centered, self.top_amplitude) * support_indicator(centered / K22_LOBE)

    def _kak(self, xi: np.ndarray) -> np.ndarray:
        a, flat = self.amplitude, self.flat_length
        rising = _lobe(np.minimum(xi, 0.0), a)
        falling = _lobe(np.maximum(xi - flat, 0.0), a)
        return np.where(xi < 0.0, rising, np.where(xi > flat, falling, a))

    def __call__(self, x: np.ndarray | float, t: float = 0.0) -> np.ndarray:
        return self.evaluate(x, t)


# --- constructors -------------------------------------------------------------


def kdv_soliton(amplitude: float) -> TravelingWave:
    return TravelingWave(family="KdVSech2", amplitude=amplitude, velocity=2 * amplitude)


def mkdv_soliton(velocity: float) -> TravelingWave:
    return TravelingWave(family="MKdVSech", amplitude=math.sqrt(velocity), velocity=velocity)


def mkdv_exotic(k: float) -> TravelingWave:
    """Periodic solution of ``u_t + u^2*u_x + u_xxx = 0`` with ``A = sqrt(32) k``."""
    if k <= 0:
        raise ValueError("wavenumber k must be positive")
    return TravelingWave(family="MKdVExotic", amplitude=math.sqrt(32) * k, velocity=4 * k * k)


def k22_compacton(velocity: float) -> TravelingWave:
    return TravelingWave(family="K22Compacton", amplitude=4 * velocity / 3, velocity=velocity)


def k22_kak(velocity: float, flat_length: float) -> TravelingWave:
    return TravelingWave(
        family="K22KAK", amplitude=4 * velocity / 3, velocity=velocity, flat_length=flat_length
    )


def k22_offset_compacton(amplitude: float, offset: float) -> TravelingWave:
    """Lobe of height ``amplitude`` over the constant level ``offset``."""
    return TravelingWave(
        family="K22OffsetCompacton",
        amplitude=amplitude,
        velocity=0.75 * (2 * offset + amplitude),
        offset=offset,
    )


def knn_compacton(order: int, velocity: float) -> TravelingWave:
    return TravelingWave(
        family="KnnCompacton",
        amplitude=2 * velocity * order / (order + 1),
        velocity=velocity,
        order=order,
    )


def sample_grid(wave: TravelingWave, t: float = 0.0, points: int = 1001) -> np.ndarray:
    """Uniform grid covering the support with one half-width of margin on each side."""

    if points < 2:
        raise ValueError("need at least two sample points")
    support = wave.support(t)
    margin = wave.half_width
    if support is None:
        center = wave.velocity * t
        reach = 8 * wave.half_width
        support = (center - reach, center + reach)
    return np.linspace(support[0] - margin, support[1] + margin, points)


def profile_csv(wave: TravelingWave, x: np.ndarray, t: float = 0.0) -> str:
    """Two-column ``x,u`` CSV of the profile at time ``t``."""

    values = wave.evaluate(x, t)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", "u"])
    for xv, uv in zip(np.asarray(x, dtype=float), values, strict=True):
        writer.writerow([f"{xv:.17g}", f"{uv:.17g}"])
    return buffer.getvalue()
