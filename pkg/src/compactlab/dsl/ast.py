"""Value types for parsed 1-D evolution equations.

An equation is a signed sum of terms set equal to zero. Each term is a coefficient
(a rational number, optionally times one named parameter) applied either to a
product of derivative atoms ``u_{x..t..}^p``, to such a product under ``outer_x_order``
extra x-derivatives (``(u^2)_xxx``), or to ``sin(u)``/``cos(u)``.

All types are frozen and hashable; structural equality is dataclass equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Literal

Transcendental = Literal["sin", "cos"]


@dataclass(frozen=True, order=True)
class Atom:
    """``u`` differentiated x_order times in x and t_order times in t, to ``power``."""

    t_order: int = 0
    x_order: int = 0
    power: int = 1

    def __post_init__(self) -> None:
        if self.power < 1:
            raise ValueError(f"atom power must be >= 1, got {self.power}")
        if self.x_order < 0 or self.t_order < 0:
            raise ValueError("derivative orders must be nonnegative")

    @property
    def order(self) -> int:
        return self.x_order + self.t_order

    def to_text(self) -> str:
        text = "u"
        if self.order:
            text += "_" + "x" * self.x_order + "t" * self.t_order
        if self.power > 1:
            text += f"^{self.power}"
        return text


@dataclass(frozen=True)
class Term:
    """One signed summand of an equation."""

    coefficient: Fraction
    atoms: tuple[Atom, ...] = ()
    outer_x_order: int = 0
    symbol: str | None = None
    transcendental: Transcendental | None = None

    def __post_init__(self) -> None:
        if self.coefficient == 0:
            raise ValueError("term coefficient must be nonzero")
        if self.transcendental is not None:
            if self.atoms != (Atom(),) or self.outer_x_order:
                raise ValueError("sin/cos terms apply to a bare u only")
        elif not self.atoms:
            raise ValueError("term must contain u")

    @property
    def u_power(self) -> int:
        """Total power of u in the product (1 for sin/cos terms)."""
        return sum(atom.power for atom in self.atoms)

    @property
    def x_derivatives(self) -> int:
        return self.outer_x_order + sum(atom.power * atom.x_order for atom in self.atoms)

    @property
    def t_derivatives(self) -> int:
        return sum(atom.power * atom.t_order for atom in self.atoms)

    @property
    def derivatives(self) -> int:
        return self.x_derivatives + self.t_derivatives

    @property
    def highest_order(self) -> int:
        """Highest derivative of u that appears once the outer derivative is expanded."""
        return self.outer_x_order + max(atom.order for atom in self.atoms)

    @property
    def is_time_term(self) -> bool:
        return any(atom.t_order for atom in self.atoms)

    def body_text(self) -> str:
        if self.transcendental is not None:
            return f"{self.transcendental}(u)"
        product = "*".join(atom.to_text() for atom in self.atoms)
        if self.outer_x_order:
            return f"({product})_" + "x" * self.outer_x_order
        return product

    def magnitude_text(self) -> str:
        """The term without its sign, in re-parseable DSL form."""
        prefix = ""
        magnitude = abs(self.coefficient)
        if magnitude != 1:
            prefix += f"{magnitude}*"
        if self.symbol is not None:
            prefix += f"{self.symbol}*"
        return prefix + self.body_text()

    def scaled(self, factor: Fraction) -> Term:
        return replace(self, coefficient=self.coefficient * factor)


@dataclass(frozen=True)
class EquationAST:
    """A homogeneous equation ``sum(terms) = 0``."""

    terms: tuple[Term, ...]
    parameters: frozenset[str] = field(default_factory=frozenset)
    source_text: str = field(default="", compare=False)

    @property
    def time_term(self) -> Term:
        for term in self.terms:
            if term.is_time_term:
                return term
        raise ValueError("equation has no time-derivative term")

    @property
    def symbols(self) -> frozenset[str]:
        """Parameter names that actually appear in some term."""
        return frozenset(term.symbol for term in self.terms if term.symbol is not None)

    def to_text(self) -> str:
        pieces: list[str] = []
        for index, term in enumerate(self.terms):
            negative = term.coefficient < 0
            if index == 0:
                pieces.append(("-" if negative else "") + term.magnitude_text())
            else:
                pieces.append(("- " if negative else "+ ") + term.magnitude_text())
        return " ".join(pieces) + " = 0"

    def __str__(self) -> str:
        return self.to_text()


def rescale_x(ast: EquationAST, s: Fraction | int) -> EquationAST:
    """Rewrite the equation in the stretched coordinate ``x' = s*x``.

    Each x-derivative becomes ``s * d/dx'``, so a term's coefficient gains
    ``s**(x-derivative count)``. Widths measured in x' are ``s`` times the widths in x
    and velocities are ``s`` times as large.
    """
    factor = Fraction(s)
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    terms = tuple(term.scaled(factor**term.x_derivatives) for term in ast.terms)
    rescaled = EquationAST(terms=terms, parameters=ast.parameters)
    return replace(rescaled, source_text=rescaled.to_text())
