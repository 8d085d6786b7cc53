"""Central finite-difference stencils of orders 2 and 4 for derivatives 1 through 5."""

from __future__ import annotations

import numpy as np

# Weights for offsets -h..h, to be divided by dx**derivative.
CENTRAL: dict[int, dict[int, tuple[float, ...]]] = {
    2: {
        1: (-1 / 2, 0.0, 1 / 2),
        2: (1.0, -2.0, 1.0),
        3: (-1 / 2, 1.0, 0.0, -1.0, 1 / 2),
        4: (1.0, -4.0, 6.0, -4.0, 1.0),
        5: (-1 / 2, 2.0, -5 / 2, 0.0, 5 / 2, -2.0, 1 / 2),
    },
    4: {
        1: (1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12),
        2: (-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12),
        3: (1 / 8, -1.0, 13 / 8, 0.0, -13 / 8, 1.0, -1 / 8),
        4: (-1 / 6, 2.0, -13 / 2, 28 / 3, -13 / 2, 2.0, -1 / 6),
        5: (1 / 6, -3 / 2, 13 / 3, -29 / 6, 0.0, 29 / 6, -13 / 3, 3 / 2, -1 / 6),
    },
}

# One-sided third derivative, second order, weights for offsets 0..4 from the boundary.
FORWARD_THIRD = (-5 / 2, 9.0, -12.0, 7.0, -3 / 2)

MAX_DERIVATIVE = 5


def weights(derivative: int, order: int = 4) -> np.ndarray:
    """Stencil weights for ``derivative`` at accuracy ``order``; empty derivative is identity."""

    if order not in CENTRAL:
        raise ValueError(f"scheme order must be one of {sorted(CENTRAL)}, got {order}")
    if derivative == 0:
        return np.array([1.0])
    if not 1 <= derivative <= MAX_DERIVATIVE:
        raise ValueError(f"derivative order {derivative} outside 0..{MAX_DERIVATIVE}")
    return np.asarray(CENTRAL[order][derivative])


def half_width(derivative: int, order: int = 4) -> int:
    """Number of neighbours on each side the stencil reaches."""
    return (len(weights(derivative, order)) - 1) // 2


def derivative_valid(values: np.ndarray, dx: float, derivative: int, order: int = 4) -> np.ndarray:
    """Derivative at every point whose stencil lies inside ``values``.

    The result is shorter than the input by ``half_width`` on each end.
    """

    w = weights(derivative, order)
    if len(values) < len(w):
        raise ValueError("grid too coarse: stencil is wider than the sampled interval")
    # np.convolve flips its kernel; reversing keeps the offset order above.
    return np.convolve(values, w[::-1], mode="valid") / dx**derivative


def derivative_periodic(
    values: np.ndarray, dx: float, derivative: int, order: int = 4
) -> np.ndarray:
    """Derivative on a periodic grid."""

    w = weights(derivative, order)
    h = (len(w) - 1) // 2
    out = np.zeros_like(values, dtype=float)
    for offset, weight in zip(range(-h, h + 1), w, strict=True):
        if weight:
            out += weight * np.roll(values, -offset)
    return out / dx**derivative


def one_sided_third(values: np.ndarray, dx: float, reverse: bool = False) -> float:
    """Third derivative at the first sample (or the last, with ``reverse``)."""

    samples = np.asarray(values, dtype=float)
    if len(samples) < len(FORWARD_THIRD):
        raise ValueError("need at least five samples for a one-sided third derivative")
    if reverse:
        # d^3/dx^3 is odd under reflection.
        return -one_sided_third(samples[::-1], dx)
    return float(np.dot(FORWARD_THIRD, samples[: len(FORWARD_THIRD)])) / dx**3
