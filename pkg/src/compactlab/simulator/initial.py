"""Initial data for runs, named by short kind strings.

    compacton[:A]        K(2,2) compacton of amplitude A (default 1)
    stretched:s[:A]      cos^2 bump s times as wide as the compacton
    offset:A,delta       compacton of height A over the level delta
    kak:lambda[:A]       kink-antikink pair with plateau length lambda
"""

from __future__ import annotations

import math

import numpy as np

from compactlab.closed_forms import k22_compacton, k22_kak, k22_offset_compacton
from compactlab.closed_forms.waves import K22_HALF_WIDTH, support_indicator

KINDS = ("compacton", "stretched", "offset", "kak")


def _numbers(raw: str, kind: str) -> list[float]:
    try:
        return [float(piece) for piece in raw.replace(",", ":").split(":") if piece.strip()]
    except ValueError as e:
        raise ValueError(f"initial data {kind!r} needs numeric arguments, got {raw!r}") from e


def stretched_bump(x: np.ndarray, stretch: float, amplitude: float = 1.0) -> np.ndarray:
    """``A cos^2(x/(4s))`` on ``|x| <= 2*pi*s``."""
    if stretch <= 0:
        raise ValueError("stretch factor must be positive")
    z = np.asarray(x, dtype=float) / stretch
    return amplitude * np.cos(z / K22_HALF_WIDTH) ** 2 * support_indicator(z / (2 * math.pi))


def initial_profile(kind: str, x: np.ndarray, center: float = 0.0) -> np.ndarray:
    """Sample the initial data described by ``kind`` at ``x``."""

    name, _, raw = kind.strip().partition(":")
    name = name.lower()
    args = _numbers(raw, kind)
    x = np.asarray(x, dtype=float) - center
    if name == "compacton" and len(args) <= 1:
        amplitude = args[0] if args else 1.0
        return k22_compacton(0.75 * amplitude).evaluate(x)
    if name == "stretched" and 1 <= len(args) <= 2:
        return stretched_bump(x, args[0], args[1] if len(args) > 1 else 1.0)
    if name == "offset" and len(args) == 2:
        return k22_offset_compacton(args[0], args[1]).evaluate(x)
    if name == "kak" and 1 <= len(args) <= 2:
        amplitude = args[1] if len(args) > 1 else 1.0
        return k22_kak(0.75 * amplitude, args[0]).evaluate(x + args[0] / 2)
    raise ValueError(
        f"unknown initial data {kind!r}; expected compacton[:A], stretched:s[:A], "
        "offset:A,delta or kak:lambda[:A]"
    )
