"""Capability report for a parsed equation.

Similarity analysis applies to every parsed equation. Simulation needs the
conservation form ``u_t + sum c * d^d/dx^d (u^m) = 0``. Closed forms need one of the
recognized families.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

from pydantic import BaseModel, Field

from compactlab.dsl.aliases import lookup_alias
from compactlab.dsl.ast import Atom, EquationAST, Term
from compactlab.dsl.parser import parse_equation

logger = logging.getLogger(__name__)

MAX_FLUX_ORDER = 5


@dataclass(frozen=True)
class FluxTerm:
    """One flux ``coefficient * symbol * d^order/dx^order (u^power)`` in ``u_t = -sum(...)``."""

    coefficient: Fraction
    order: int
    power: int
    symbol: str | None = None


class ValidationReport(BaseModel):
    similarity: bool = True
    simulate: bool = False
    closed_form: str | None = Field(None, description="Recognized family label, e.g. K(2,2)")
    wave_families: list[str] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)


def _flux_term(term: Term) -> FluxTerm | None:
    if term.transcendental is not None:
        return None
    atoms = term.atoms
    if len(atoms) == 1 and atoms[0].t_order == 0:
        atom = atoms[0]
        if term.outer_x_order and atom.x_order == 0:
            # (u^m)_x..x
            return FluxTerm(term.coefficient, term.outer_x_order, atom.power, term.symbol)
        if not term.outer_x_order and atom.power == 1 and atom.x_order:
            # u_x..x
            return FluxTerm(term.coefficient, atom.x_order, 1, term.symbol)
    if term.outer_x_order:
        return None
    # u^p * u_x == (u^{p+1})_x / (p+1)
    plain = [a for a in atoms if a.x_order == 0 and a.t_order == 0]
    slopes = [a for a in atoms if a.x_order == 1 and a.t_order == 0 and a.power == 1]
    if len(plain) == 1 and len(slopes) == 1 and len(atoms) == 2:
        power = plain[0].power + 1
        return FluxTerm(term.coefficient / power, 1, power, term.symbol)
    return None


def conservation_form(ast: EquationAST) -> list[FluxTerm] | None:
    """Flux terms of ``ast`` or ``None`` when it is not in simulable conservation form."""

    time_term = ast.time_term
    if time_term.atoms != (Atom(t_order=1),) or time_term.outer_x_order:
        return None
    fluxes: list[FluxTerm] = []
    for term in ast.terms:
        if term is time_term:
            continue
        flux = _flux_term(term)
        if flux is None or not 1 <= flux.order <= MAX_FLUX_ORDER:
            return None
        # normalize to u_t = -sum(...)
        fluxes.append(
            FluxTerm(flux.coefficient / time_term.coefficient, flux.order, flux.power, flux.symbol)
        )
    return fluxes


def _term_counts(ast: EquationAST) -> Counter[Term]:
    return Counter(ast.terms)


def same_equation(left: EquationAST, right: EquationAST) -> bool:
    return _term_counts(left) == _term_counts(right)


@lru_cache
def _alias_ast(name: str) -> EquationAST:
    alias = lookup_alias(name)
    assert alias is not None
    return parse_equation(alias.text, parameters=alias.parameters)


def knn_order(ast: EquationAST) -> int | None:
    """Return n when ``ast`` is ``u_t + (u^n)_x + (u^n)_xxx = 0``, else ``None``."""

    if len(ast.terms) != 3 or any(term.symbol for term in ast.terms):
        return None
    powers = {term.u_power for term in ast.terms if not term.is_time_term}
    if len(powers) != 1:
        return None
    (n,) = powers
    if n < 2 or not same_equation(ast, _alias_ast(f"Knm:{n},{n}")):
        return None
    return n


_FAMILY_WAVES: dict[str, list[str]] = {
    "KdV": ["KdVSech2"],
    "MKdV": ["MKdVExotic"],
    "MKdV6": ["MKdVSech"],
    "K(2,2)": [
        "K22Compacton",
        "K22KAK",
        "K22CompOnKAK",
        "K22OffsetCompacton",
        "KnnCompacton",
    ],
    "K(n,n)": ["KnnCompacton"],
    "sine-Gordon": [],
}


_NAMED_FAMILIES = (
    ("KdV", "KdV"),
    ("MKdV", "MKdV"),
    ("MKdV6", "MKdV6"),
    ("SG", "sine-Gordon"),
)


def recognize_family(ast: EquationAST) -> str | None:
    """Label of the closed-form family ``ast`` belongs to, by structural equality."""

    for alias, label in _NAMED_FAMILIES:
        if same_equation(ast, _alias_ast(alias)):
            return label
    n = knn_order(ast)
    if n == 2:
        return "K(2,2)"
    if n is not None:
        return "K(n,n)"
    return None


def validate(ast: EquationAST) -> ValidationReport:
    """Report which downstream capabilities apply to ``ast``."""

    warnings: list[str] = []
    fluxes = conservation_form(ast)
    if fluxes is not None:
        for flux in fluxes:
            if flux.order % 2 == 0:
                warnings.append(
                    f"even-order flux d^{flux.order}(u^{flux.power}) is diffusive or "
                    "anti-diffusive; the explicit simulator may be unstable"
                )
            if flux.symbol is not None:
                warnings.append(f"coefficient {flux.symbol!r} must be bound before simulating")

    family = recognize_family(ast)
    if family == "MKdV6":
        label = "MKdV"
    else:
        label = family
    report = ValidationReport(
        simulate=fluxes is not None,
        closed_form=label,
        wave_families=list(_FAMILY_WAVES.get(family or "", [])),
        warnings=warnings,
    )
    logger.debug("Validated %s: %s", ast, report.model_dump())
    return report
