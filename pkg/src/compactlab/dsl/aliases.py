"""Built-in equation aliases for the standard families.

Aliases expand to canonical DSL strings plus the parameter names they declare, so
``K22`` or ``Knm:3,2`` can be used wherever an equation string is accepted. Matching
is case-insensitive.
"""

from __future__ import annotations

import logging
from collections.abc import Collection
from dataclasses import dataclass

from compactlab.dsl.ast import EquationAST
from compactlab.dsl.parser import parse_equation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AliasEquation:
    name: str
    text: str
    parameters: frozenset[str] = frozenset()


_FIXED: dict[str, AliasEquation] = {
    "kdv": AliasEquation("KdV", "u_t + 6*u*u_x + u_xxx = 0"),
    "mkdv": AliasEquation("MKdV", "u_t + u^2*u_x + u_xxx = 0"),
    "mkdv6": AliasEquation("MKdV6", "u_t + 6*u^2*u_x + u_xxx = 0"),
    "k22": AliasEquation("K22", "u_t + (u^2)_x + (u^2)_xxx = 0"),
    "sg": AliasEquation("SG", "u_xt - sin(u) = 0"),
    "k212": AliasEquation(
        "K212", "u_t + (u^2)_x + u_xxx + eps*(u^2)_xxx = 0", frozenset({"eps"})
    ),
    "curvkdv": AliasEquation(
        "CurvKdV", "u_t + u*u_x + u_xxx + eps*(u_xx^2)_x = 0", frozenset({"eps"})
    ),
}


def _power_text(power: int) -> str:
    return "u" if power == 1 else f"(u^{power})"


def _knm(n: int, m: int) -> AliasEquation:
    convective = f"({_power_text(n)})_x" if n > 1 else "u_x"
    dispersive = f"({_power_text(m)})_xxx" if m > 1 else "u_xxx"
    return AliasEquation(f"Knm:{n},{m}", f"u_t + {convective} + {dispersive} = 0")


def _nls(n: int) -> AliasEquation:
    nonlinearity = "u" if n == 1 else f"u^{n}"
    return AliasEquation(f"NLS:{n}", f"u_t + u_xx + {nonlinearity} = 0")


def _positive_ints(raw: str, count: int, alias: str) -> list[int]:
    pieces = [piece.strip() for piece in raw.split(",")]
    if len(pieces) != count:
        raise ValueError(f"alias {alias!r} needs {count} integer argument(s)")
    try:
        values = [int(piece) for piece in pieces]
    except ValueError as e:
        raise ValueError(f"alias {alias!r} arguments must be integers") from e
    if any(value < 1 for value in values):
        raise ValueError(f"alias {alias!r} arguments must be positive")
    return values


def lookup_alias(name: str) -> AliasEquation | None:
    """Return the alias named ``name`` or ``None`` when it is not an alias."""

    key, _, argument = name.strip().partition(":")
    key = key.lower()
    if key in _FIXED and not argument:
        return _FIXED[key]
    if key == "knm" and argument:
        n, m = _positive_ints(argument, 2, name)
        return _knm(n, m)
    if key == "nls":
        (n,) = _positive_ints(argument, 1, name) if argument else (3,)
        return _nls(n)
    return None


def alias_names() -> list[str]:
    return [alias.name for alias in _FIXED.values()] + ["Knm:n,m", "NLS:n"]


def resolve_equation(source: str, parameters: Collection[str] = ()) -> EquationAST:
    """Parse ``source`` as an alias or as DSL text.

    Parameters declared by an alias are merged with ``parameters``.
    """

    alias = lookup_alias(source)
    if alias is None:
        return parse_equation(source, parameters=parameters)
    logger.debug("Expanded alias %s to %r", alias.name, alias.text)
    return parse_equation(alias.text, parameters=alias.parameters | frozenset(parameters))
