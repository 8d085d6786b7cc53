"""Morlet-atom signals and their multi-scale derivative estimate.

A signal is a finite sum ``u(x) = sum C[j, k] psi(2**j x - k)`` of atoms of the mother
wavelet ``psi(x) = pi**-0.25 exp(-i alpha x - x**2/2)``. Near a point ``x0`` the atoms
whose centers lie within one unit of ``2**j x0`` dominate, and each derivative of the
scale-``j`` part brings down a factor ``-i alpha 2**j = -i / L_j``.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Iterable

import numpy as np
from pydantic import Field, model_validator
from scipy.integrate import trapezoid

from compactlab.wire import WireModel

logger = logging.getLogger(__name__)

MIN_ALPHA = 5.0
ATOM_REACH = 1.0

_NORM = math.pi**-0.25


def morlet_eval(alpha: float, x: np.ndarray | float) -> np.ndarray:
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    x = np.asarray(x, dtype=float)
    return _NORM * np.exp(-1j * alpha * x - 0.5 * x * x)


class MorletAtom(WireModel):
    j: int
    k: int
    c: float


class MorletParams(WireModel):
    alpha: float = Field(..., gt=0)
    atoms: list[MorletAtom] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_alpha(self) -> MorletParams:
        if self.alpha < MIN_ALPHA:
            raise ValueError(
                f"alpha must be >= {MIN_ALPHA:g} for the derivative estimate, got {self.alpha}"
            )
        return self

    @property
    def scales(self) -> list[int]:
        return sorted({atom.j for atom in self.atoms})

    def half_width(self, j: int) -> float:
        """``L_j = 1 / (alpha 2**j)``."""
        return 1.0 / (self.alpha * math.ldexp(1.0, j))

    def scale_parts(self, x0: float) -> dict[int, complex]:
        """``u_j(x0)`` from the atoms of each scale within reach of ``x0``."""
        parts: dict[int, complex] = defaultdict(complex)
        for atom in self.atoms:
            offset = math.ldexp(x0, atom.j) - atom.k
            if abs(offset) <= ATOM_REACH:
                parts[atom.j] += atom.c * complex(morlet_eval(self.alpha, offset))
        return dict(parts)


def morlet_reconstruct(params: MorletParams, x: np.ndarray | float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for atom in params.atoms:
        out += atom.c * morlet_eval(params.alpha, np.ldexp(x, atom.j) - atom.k)
    return out


def morlet_transform(
    x: np.ndarray,
    values: np.ndarray,
    alpha: float,
    scales: Iterable[int],
    translations: Iterable[int],
) -> MorletParams:
    """Atom coefficients ``C[j, k] = 2**j <u, psi(2**j x - k)>``.

    The factor ``2**j`` undoes the atom's squared norm, so a signal made of one atom
    returns that atom's coefficient. Only the real part is kept.
    """

    x = np.asarray(x, dtype=float)
    values = np.asarray(values)
    translations = list(translations)
    atoms = []
    for j in scales:
        for k in translations:
            atom = morlet_eval(alpha, np.ldexp(x, j) - k)
            c = math.ldexp(1.0, j) * trapezoid(values * np.conj(atom), x)
            atoms.append(MorletAtom(j=j, k=k, c=float(np.real(c))))
    return MorletParams(alpha=alpha, atoms=atoms)


def _parts_or_raise(params: MorletParams, x0: float) -> dict[int, complex]:
    parts = params.scale_parts(x0)
    if not parts:
        raise ValueError(f"no Morlet scale has an atom covering x0={x0:g}")
    return parts


def dominant_scale(params: MorletParams, x0: float) -> float:
    """Half-width ``L_j`` of the scale contributing most to ``u(x0)``."""
    parts = _parts_or_raise(params, x0)
    j = max(parts, key=lambda scale: abs(parts[scale]))
    return params.half_width(j)


def derivative_estimate(
    params: MorletParams, x0: float, n: int
) -> tuple[complex, complex]:
    """Estimate ``d^n u/dx^n (x0)`` as ``(multi_scale, single_scale)``.

    ``multi_scale`` is ``(-i)**n sum_j u_j(x0) / L_j**n``; ``single_scale`` replaces
    every ``L_j`` by the dominant scale's half-width, the one-width rule used for
    similarity analysis. Both equal ``u(x0)`` for ``n = 0``.
    """

    if n < 0:
        raise ValueError(f"derivative order must be >= 0, got {n}")
    parts = _parts_or_raise(params, x0)
    phase = (-1j) ** n
    multi = phase * sum(u_j / params.half_width(j) ** n for j, u_j in parts.items())
    dominant = dominant_scale(params, x0)
    single = phase * sum(parts.values()) / dominant**n
    logger.debug(
        "derivative n=%s at x0=%g over scales %s: %s (single %s)",
        n,
        x0,
        sorted(parts),
        multi,
        single,
    )
    return complex(multi), complex(single)
