"""Closed-form families by name, as used on the command line and over HTTP."""

from __future__ import annotations

import logging
from collections.abc import Callable
from typing import Literal

from compactlab.closed_forms.compound import compose_compound
from compactlab.closed_forms.waves import (
    TravelingWave,
    k22_compacton,
    k22_kak,
    k22_offset_compacton,
    kdv_soliton,
    knn_compacton,
    mkdv_exotic,
    mkdv_soliton,
)

logger = logging.getLogger(__name__)

FamilyName = Literal[
    "kdv-soliton",
    "mkdv-soliton",
    "mkdv-exotic",
    "k22-compacton",
    "k22-kak",
    "k22-offset",
    "k22-compound",
    "knn-compacton",
]

# Parameter names; ``flat`` is the KAK plateau length lambda.
FAMILY_FIELDS = ("A", "V", "flat", "delta", "n", "k", "top_V")


class FamilyArgumentError(ValueError):
    """A family was requested without the parameters it needs."""

    def __init__(self, family: str, missing: list[str]) -> None:
        super().__init__(f"family {family} needs {', '.join(missing)}")
        self.family = family
        self.missing = missing


def _pick(family: str, values: dict[str, float | None], *names: str) -> list[float]:
    missing = [name for name in names if values.get(name) is None]
    if missing:
        raise FamilyArgumentError(family, missing)
    return [values[name] for name in names]


def _kdv(values: dict[str, float | None]) -> TravelingWave:
    if values.get("A") is None and values.get("V") is not None:
        return kdv_soliton(values["V"] / 2)
    (amplitude,) = _pick("kdv-soliton", values, "A")
    return kdv_soliton(amplitude)


def _compound(values: dict[str, float | None]) -> TravelingWave:
    velocity, flat, top_velocity, delta = _pick(
        "k22-compound", values, "V", "flat", "top_V", "delta"
    )
    return compose_compound(k22_kak(velocity, flat), k22_compacton(top_velocity), delta)


def _knn(values: dict[str, float | None]) -> TravelingWave:
    order, velocity = _pick("knn-compacton", values, "n", "V")
    if order != int(order):
        raise ValueError(f"K(n,n) order must be an integer, got {order}")
    return knn_compacton(int(order), velocity)


_BUILDERS: dict[str, Callable[[dict[str, float | None]], TravelingWave]] = {
    "kdv-soliton": _kdv,
    "mkdv-soliton": lambda v: mkdv_soliton(*_pick("mkdv-soliton", v, "V")),
    "mkdv-exotic": lambda v: mkdv_exotic(*_pick("mkdv-exotic", v, "k")),
    "k22-compacton": lambda v: k22_compacton(*_pick("k22-compacton", v, "V")),
    "k22-kak": lambda v: k22_kak(*_pick("k22-kak", v, "V", "flat")),
    "k22-offset": lambda v: k22_offset_compacton(*_pick("k22-offset", v, "A", "delta")),
    "k22-compound": _compound,
    "knn-compacton": _knn,
}

FAMILY_NAMES: tuple[str, ...] = tuple(sorted(_BUILDERS))

_EQUATIONS = {
    "KdVSech2": "KdV",
    "MKdVSech": "MKdV6",
    "MKdVExotic": "MKdV",
    "K22Compacton": "K22",
    "K22KAK": "K22",
    "K22OffsetCompacton": "K22",
    "K22CompOnKAK": "K22",
}


def build_wave(family: str, **values: float | None) -> TravelingWave:
    """Construct ``family`` from the named parameters in :data:`FAMILY_FIELDS`."""

    builder = _BUILDERS.get(family)
    if builder is None:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILY_NAMES)}")
    unknown = set(values) - set(FAMILY_FIELDS)
    if unknown:
        raise ValueError(f"unknown family parameter(s): {', '.join(sorted(unknown))}")
    wave = builder(values)
    logger.debug("Built %s: %s", family, wave.model_dump(by_alias=True))
    return wave


def family_equation(wave: TravelingWave) -> str:
    """Alias of the equation the wave solves."""
    if wave.family == "KnnCompacton":
        return f"Knm:{wave.order},{wave.order}"
    alias = _EQUATIONS.get(wave.family)
    if alias is None:
        raise ValueError(f"no default equation for {wave.family}")
    return alias
