"""A compacton riding on the plateau of a K(2,2) kink-antikink pair.

On the plateau ``u = 4V/3`` the top lobe is an offset compacton, so its speed is
``V' = 3*A_top/4 + 2V``. The structure exists until the faster top lobe reaches the
falling ramp, i.e. for ``0 < t < (lambda - 4*pi - delta)/(V' - V)``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence

import numpy as np

from compactlab.closed_forms.stencils import one_sided_third
from compactlab.closed_forms.waves import K22_LOBE, TravelingWave

logger = logging.getLogger(__name__)

JUNCTION_STEP = 1e-2
JUNCTION_TOLERANCE = 1e-3


def coupled_velocity(kak_velocity: float, top_amplitude: float) -> float:
    return 0.75 * top_amplitude + 2 * kak_velocity


def _top_amplitude(kak: TravelingWave, top: TravelingWave) -> float:
    if top.family == "K22Compacton":
        return top.amplitude
    if top.family == "K22OffsetCompacton":
        if not math.isclose(top.offset, kak.amplitude, rel_tol=1e-9):
            raise ValueError(
                f"velocity coupling violated: top rides on {top.offset}, plateau is {kak.amplitude}"
            )
        return top.amplitude
    raise ValueError(f"top structure must be a K(2,2) compacton, got {top.family}")


def composite_jumps(
    profile: Callable[[np.ndarray], np.ndarray],
    points: Sequence[float],
    h: float = JUNCTION_STEP,
    power: int = 2,
) -> list[float]:
    """Jump of ``d^3(u^power)/dx^3`` across each point, from one-sided stencils."""

    offsets = h * np.arange(5)
    jumps = []
    for point in points:
        right = np.asarray(profile(point + offsets), dtype=float) ** power
        left = np.asarray(profile(point - offsets[::-1]), dtype=float) ** power
        jumps.append(abs(one_sided_third(right, h) - one_sided_third(left, h, reverse=True)))
    return jumps


def junction_jumps(
    wave: TravelingWave, t: float = 0.0, h: float = JUNCTION_STEP
) -> list[float]:
    """Third-derivative jumps of ``u^2`` at every breakpoint of ``wave``."""
    points = sorted(set(wave.breakpoints(t)))
    return composite_jumps(lambda x: wave.evaluate(x, t), points, h)


def compose_compound(kak: TravelingWave, top: TravelingWave, delta: float) -> TravelingWave:
    """Place ``top`` on the plateau of ``kak``, starting ``delta`` past the plateau start."""

    if kak.family != "K22KAK":
        raise ValueError(f"base structure must be a K22KAK, got {kak.family}")
    top_amplitude = _top_amplitude(kak, top)
    velocity = coupled_velocity(kak.velocity, top_amplitude)
    if top.family == "K22OffsetCompacton" and not math.isclose(
        top.velocity, velocity, rel_tol=1e-9
    ):
        raise ValueError(
            f"velocity coupling violated: top moves at {top.velocity}, expected V' = {velocity}"
        )
    if velocity <= kak.velocity:
        raise ValueError("compound window is empty (Vprime <= V)")

    compound = TravelingWave(
        family="K22CompOnKAK",
        amplitude=kak.amplitude,
        velocity=kak.velocity,
        flat_length=kak.flat_length,
        offset=delta,
        secondary_velocity=velocity,
    )
    worst = max(junction_jumps(compound), default=0.0)
    if worst > JUNCTION_TOLERANCE:
        raise ValueError(f"junction smoothness violated: u^2 third-derivative jump {worst:.3g}")
    window = compound.window()
    logger.info(
        "Composed compound: lambda=%s delta=%s V=%s V'=%s window=(0, %s)",
        kak.flat_length,
        delta,
        kak.velocity,
        velocity,
        window[1],
    )
    return compound


def top_exit_time(compound: TravelingWave) -> float:
    """Time at which the top lobe's front reaches the falling ramp."""
    window = compound.window()
    if window is None:
        raise ValueError(f"{compound.family} has no validity window")
    return window[1]


def top_center(compound: TravelingWave, t: float = 0.0) -> float:
    return compound.secondary_velocity * t + compound.offset + K22_LOBE
