"""Map an equation to an algebraic relation among amplitude, width and velocity.

Each term is evaluated on the formal pulse ``u = A * exp((x - V t) / L)``: every
derivative contributes a factor ``1/L``, a time derivative an extra ``V``, and an outer
derivative of ``u^m`` a factor ``m`` (the coefficient sum of the Leibniz expansion).
``sin(u)``/``cos(u)`` map to ``sin(A)``/``cos(A)`` without a width factor. Every term
also gets an independent sign slot, so one equation yields ``2^T`` sign branches.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
import sympy as sp

from compactlab.dsl.ast import EquationAST, Term

logger = logging.getLogger(__name__)

A = sp.Symbol("A", real=True)
V = sp.Symbol("V", real=True)
L = sp.Symbol("L", positive=True)

Branch = tuple[int, ...]


def parameter_symbol(name: str) -> sp.Symbol:
    return sp.Symbol(name, real=True)


@dataclass(frozen=True)
class ScalingMonomial:
    """``coefficient * A^a_power * V^v_power * trans(A) / L^invL_power``, signed by its slot."""

    coefficient: sp.Expr
    a_power: int
    v_power: int
    invL_power: int
    trans: Literal["sin", "cos"] | None = None
    sign_slot: int = 0

    def __post_init__(self) -> None:
        if self.coefficient == 0:
            raise ValueError("monomial coefficient must be nonzero")


def scale_term(term: Term, sign_slot: int = 0) -> ScalingMonomial:
    """Apply the similarity substitution to one term."""

    coefficient: sp.Expr = sp.Rational(term.coefficient.numerator, term.coefficient.denominator)
    if term.symbol is not None:
        coefficient *= parameter_symbol(term.symbol)
    if term.transcendental is not None:
        return ScalingMonomial(coefficient, 0, 0, 0, term.transcendental, sign_slot)
    if term.t_derivatives > 1:
        raise ValueError(f"unsupported term {term.body_text()}: more than one time derivative")
    power = term.u_power
    coefficient *= sp.Integer(power) ** term.outer_x_order
    return ScalingMonomial(
        coefficient=coefficient,
        a_power=power,
        v_power=term.t_derivatives,
        invL_power=term.derivatives,
        sign_slot=sign_slot,
    )


@dataclass(frozen=True)
class SimilarityRelation:
    """``sum(s_i * monomial_i) = 0``, scaled by ``L^l_degree`` and divided by ``A^a_shift``."""

    monomials: tuple[ScalingMonomial, ...]
    parameters: frozenset[str]
    source: EquationAST = field(compare=False)
    l_degree: int = 0
    a_shift: int = 0

    @property
    def slots(self) -> int:
        return len(self.monomials)

    def l_exponent(self, monomial: ScalingMonomial) -> int:
        return self.l_degree - monomial.invL_power

    def a_exponent(self, monomial: ScalingMonomial) -> int:
        return monomial.a_power - self.a_shift

    @property
    def l_exponents(self) -> list[int]:
        return sorted({self.l_exponent(m) for m in self.monomials})

    @property
    def is_transcendental(self) -> bool:
        return any(m.trans is not None for m in self.monomials)

    @property
    def is_degenerate(self) -> bool:
        """True when no term constrains the width."""
        return len(self.l_exponents) == 1

    @property
    def symbols(self) -> frozenset[str]:
        names: set[str] = set()
        for monomial in self.monomials:
            names |= {s.name for s in monomial.coefficient.free_symbols}
        return frozenset(names)

    def term_expr(self, monomial: ScalingMonomial) -> sp.Expr:
        """Normalized monomial without its sign slot."""
        expr = (
            monomial.coefficient
            * A ** self.a_exponent(monomial)
            * V**monomial.v_power
            * L ** self.l_exponent(monomial)
        )
        if monomial.trans == "sin":
            expr *= sp.sin(A)
        elif monomial.trans == "cos":
            expr *= sp.cos(A)
        return expr

    def raw_term_expr(self, monomial: ScalingMonomial) -> sp.Expr:
        """Monomial as produced by the substitution, before normalization."""
        return self.term_expr(monomial) * A**self.a_shift / L**self.l_degree

    def expression(self, branch: Branch | None = None) -> sp.Expr:
        signs = branch if branch is not None else default_branch(self)
        check_branch(self, signs)
        return sp.Add(*(s * self.term_expr(m) for s, m in zip(signs, self.monomials, strict=True)))

    def substitute(self, params: Mapping[str, float] | None = None) -> SimilarityRelation:
        """Copy with ``params`` substituted exactly into the coefficients.

        Names missing from ``params`` stay symbolic. A term whose coefficient vanishes
        is dropped and the normalization is recomputed from the remaining terms.
        """

        if not params:
            return self
        bindings = {
            parameter_symbol(name): sp.nsimplify(value, rational=True)
            for name, value in params.items()
        }
        monomials = []
        for monomial in self.monomials:
            coefficient = sp.sympify(monomial.coefficient).subs(bindings)
            if coefficient != 0:
                monomials.append(replace(monomial, coefficient=coefficient))
        if not any(m.v_power for m in monomials):
            raise ValueError("relation needs a velocity term")
        return replace(
            self,
            monomials=tuple(monomials),
            parameters=self.parameters - frozenset(params),
            l_degree=max(m.invL_power for m in monomials),
            a_shift=min(m.a_power for m in monomials),
        )

    def bind(self, params: Mapping[str, float] | None = None) -> BoundRelation:
        return BoundRelation.from_relation(self, params or {})


def build_relation(ast: EquationAST) -> SimilarityRelation:
    """Map ``ast`` to its normalized similarity relation."""

    monomials = tuple(scale_term(term, index) for index, term in enumerate(ast.terms))
    if not any(m.v_power for m in monomials):
        raise ValueError("relation needs a velocity term")
    relation = SimilarityRelation(
        monomials=monomials,
        parameters=ast.parameters,
        source=ast,
        l_degree=max(m.invL_power for m in monomials),
        a_shift=min(m.a_power for m in monomials),
    )
    logger.debug(
        "Built relation for %s: L^%s, A^-%s, %s slots",
        ast,
        relation.l_degree,
        relation.a_shift,
        relation.slots,
    )
    return relation


# --- sign branches -----------------------------------------------------------


def default_branch(rel: SimilarityRelation) -> Branch:
    return (1,) * rel.slots


def check_branch(rel: SimilarityRelation, branch: Branch) -> None:
    if len(branch) != rel.slots or any(s not in (1, -1) for s in branch):
        raise ValueError(f"branch must be {rel.slots} signs of +1/-1, got {branch}")


def parse_branch(text: str) -> Branch:
    """``"+-+"`` -> ``(1, -1, 1)``."""
    if not text or set(text) - {"+", "-"}:
        raise ValueError(f"branch must be a string of + and -, got {text!r}")
    return tuple(1 if c == "+" else -1 for c in text)


def format_branch(branch: Branch) -> str:
    return "".join("+" if s > 0 else "-" for s in branch)


def branches(rel: SimilarityRelation) -> list[Branch]:
    """All sign assignments, deduplicated by the relation they produce."""

    seen: set[sp.Expr] = set()
    unique: list[Branch] = []
    for branch in itertools.product((1, -1), repeat=rel.slots):
        expr = sp.expand(rel.expression(branch))
        if expr in seen:
            continue
        seen.add(expr)
        unique.append(branch)
    return unique


# --- numeric binding ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoundRelation:
    """A relation with every parameter bound, ready for fast numeric evaluation."""

    relation: SimilarityRelation
    coefficients: np.ndarray
    a_exponents: np.ndarray
    v_exponents: np.ndarray
    l_exponents: np.ndarray
    trans: tuple[str | None, ...]

    @classmethod
    def from_relation(
        cls, rel: SimilarityRelation, params: Mapping[str, float]
    ) -> BoundRelation:
        bindings = {parameter_symbol(name): value for name, value in params.items()}
        values: list[float] = []
        for monomial in rel.monomials:
            bound = sp.sympify(monomial.coefficient).subs(bindings)
            if bound.free_symbols:
                missing = ", ".join(sorted(s.name for s in bound.free_symbols))
                raise ValueError(f"unbound parameter(s): {missing}")
            values.append(float(bound))
        return cls(
            relation=rel,
            coefficients=np.array(values, dtype=float),
            a_exponents=np.array([rel.a_exponent(m) for m in rel.monomials], dtype=int),
            v_exponents=np.array([m.v_power for m in rel.monomials], dtype=int),
            l_exponents=np.array([rel.l_exponent(m) for m in rel.monomials], dtype=int),
            trans=tuple(m.trans for m in rel.monomials),
        )

    def _weights(self, amplitude: float, velocity: float, branch: Branch) -> np.ndarray:
        if not np.isfinite(amplitude):
            raise ValueError("amplitude must be a finite number")
        check_branch(self.relation, branch)
        weights = (
            np.asarray(branch, dtype=float)
            * self.coefficients
            * amplitude**self.a_exponents
            * velocity**self.v_exponents
        )
        for index, kind in enumerate(self.trans):
            if kind == "sin":
                weights[index] *= np.sin(amplitude)
            elif kind == "cos":
                weights[index] *= np.cos(amplitude)
        return weights

    def polynomial(self, amplitude: float, velocity: float, branch: Branch) -> dict[int, float]:
        """Coefficients of the relation as a polynomial in L, keyed by exponent."""
        weights = self._weights(amplitude, velocity, branch)
        coefficients: dict[int, float] = {}
        for exponent, weight in zip(self.l_exponents.tolist(), weights, strict=True):
            coefficients[exponent] = coefficients.get(exponent, 0.0) + float(weight)
        return coefficients

    def terms(self, amplitude: float, velocity: float, width: float, branch: Branch) -> np.ndarray:
        """Signed value of every monomial at (A, V, L)."""
        return self._weights(amplitude, velocity, branch) * width ** self.l_exponents.astype(float)

    def evaluate(self, amplitude: float, velocity: float, width: float, branch: Branch) -> float:
        return float(np.sum(self.terms(amplitude, velocity, width, branch)))

