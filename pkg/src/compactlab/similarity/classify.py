"""Qualitative structure of a similarity relation.

Three features are looked for on one sign branch:

- a velocity law ``V = alpha * A^p + beta`` that makes the width independent of A
  (the compacton signature),
- rest amplitudes: nonzero A solving the relation at V = 0,
- bifurcations: amplitudes along ``V = alpha * A^p`` where the width polynomial has a
  double root.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from functools import reduce
from typing import Any

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, field_serializer

from compactlab.similarity.relation import (
    A,
    L,
    V,
    Branch,
    SimilarityRelation,
    default_branch,
    format_branch,
    parameter_symbol,
)

logger = logging.getLogger(__name__)

LAW_POWERS = (1, 2, 3, -1, -2, -3)
L0 = sp.Symbol("L0", positive=True)
_ALPHA = sp.Symbol("alpha")
_BETA = sp.Symbol("beta")


def _text(expr: Any) -> Any:
    if isinstance(expr, sp.Basic):
        return sp.sstr(expr)
    if isinstance(expr, list):
        return [_text(item) for item in expr]
    return expr


class _ExprModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)


class ConstantWidthLaw(_ExprModel):
    """``V = alpha * A^power + beta`` keeps ``L = L0`` for every amplitude."""

    alpha: sp.Expr
    power: int
    beta: sp.Expr

    @field_serializer("alpha", "beta")
    def serialize_exprs(self, value: sp.Expr) -> str:
        return _text(value)


class Bifurcation(_ExprModel):
    alpha: float
    power: int
    discriminant: sp.Expr
    critical_amplitudes: list[sp.Expr] = Field(default_factory=list)
    multiplicity: int = 2

    @field_serializer("discriminant", "critical_amplitudes")
    def serialize_exprs(self, value: Any) -> Any:
        return _text(value)


class QualitativeReport(_ExprModel):
    branch: str
    degenerate: bool = False
    constant_width_law: ConstantWidthLaw | None = None
    rest_amplitude: list[sp.Expr] | None = None
    bifurcation: Bifurcation | None = None
    velocity_law: tuple[sp.Expr, int] | None = None
    notes: list[str] = Field(default_factory=list)

    @field_serializer("rest_amplitude", "velocity_law")
    def serialize_exprs(self, value: Any) -> Any:
        if isinstance(value, tuple):
            return [_text(value[0]), value[1]]
        return _text(value)


def _bind(expr: sp.Expr, params: Mapping[str, float] | None) -> sp.Expr:
    if not params:
        return expr
    return expr.subs({parameter_symbol(k): sp.nsimplify(v) for k, v in params.items()})


def constant_width_law(expr: sp.Expr) -> ConstantWidthLaw | None:
    """Search ``V = alpha*A^p + beta`` for integer p making ``L = L0`` solve ``expr`` for all A."""

    for power in LAW_POWERS:
        substituted = expr.subs({V: _ALPHA * A**power + _BETA, L: L0})
        cleared = sp.expand(substituted * A**3)
        try:
            coefficients = sp.Poly(cleared, A).coeffs()
        except sp.PolynomialError:
            return None
        solutions = sp.solve(coefficients, [_ALPHA, _BETA], dict=True)
        for solution in solutions:
            alpha = sp.simplify(solution.get(_ALPHA, _ALPHA))
            beta = sp.simplify(solution.get(_BETA, _BETA))
            if alpha.has(_ALPHA) or beta.has(_BETA) or alpha == 0:
                continue
            return ConstantWidthLaw(alpha=alpha, power=power, beta=beta)
    return None


def rest_amplitudes(expr: sp.Expr) -> list[sp.Expr] | None:
    """Nonzero amplitudes solving the relation with the pulse at rest."""

    at_rest = expr.subs(V, 0)
    if not at_rest.has(A):
        return None
    solutions = [s for s in sp.solve(at_rest, A) if s != 0]
    return [sp.simplify(s) for s in solutions] or None


def _width_polynomial(rel: SimilarityRelation, expr: sp.Expr) -> tuple[sp.Poly, sp.Symbol] | None:
    nonzero = [e for e in rel.l_exponents if e]
    if not nonzero:
        return None
    g = reduce(math.gcd, nonzero)
    if max(nonzero) // g != 2:
        return None
    y = sp.Symbol("y", positive=True)
    return sp.Poly(sp.expand(expr).subs(L**g, y).subs(L, y ** sp.Rational(1, g)), y), y


def bifurcation(
    rel: SimilarityRelation, expr: sp.Expr, alpha: float = 1.0, power: int = 1
) -> Bifurcation | None:
    """Double roots of the width quadratic along ``V = alpha * A^power``."""

    found = _width_polynomial(rel, expr)
    if found is None:
        return None
    poly, _ = found
    a, b, c = (poly.coeff_monomial(poly.gens[0] ** k) for k in (2, 1, 0))
    law = {V: sp.nsimplify(alpha) * A**power}
    discriminant = sp.factor(sp.expand((b**2 - 4 * a * c).subs(law)))
    if not discriminant.has(A):
        return None
    critical = []
    for root in sp.solve(discriminant, A):
        root = sp.simplify(root)
        if root == 0 or root.is_real is False or root.is_negative:
            continue
        if root.is_negative is None and root.could_extract_minus_sign():
            continue
        critical.append(root)
    if not critical:
        return None
    return Bifurcation(
        alpha=alpha, power=power, discriminant=discriminant, critical_amplitudes=critical
    )


def classify(
    rel: SimilarityRelation,
    branch: Branch | None = None,
    *,
    params: Mapping[str, float] | None = None,
    law_alpha: float = 1.0,
    law_power: int = 1,
) -> QualitativeReport:
    """Qualitative report for one branch (all ``+`` by default)."""

    branch = default_branch(rel) if branch is None else branch
    report = QualitativeReport(branch=format_branch(branch))
    if rel.is_degenerate:
        report.degenerate = True
        report.notes.append("relation does not involve L; every width is admissible")
        return report
    if rel.is_transcendental:
        report.notes.append("transcendental in A; no algebraic velocity law")
        return report

    expr = _bind(rel.expression(branch), params)
    report.constant_width_law = constant_width_law(expr)
    law = report.constant_width_law
    if law is not None and law.beta == 0:
        report.velocity_law = (law.alpha, law.power)
    report.rest_amplitude = rest_amplitudes(expr)
    report.bifurcation = bifurcation(rel, expr, law_alpha, law_power)
    logger.info(
        "Classified %s on branch %s: law=%s rest=%s bifurcation=%s",
        rel.source,
        report.branch,
        law is not None,
        report.rest_amplitude is not None,
        report.bifurcation is not None,
    )
    return report
