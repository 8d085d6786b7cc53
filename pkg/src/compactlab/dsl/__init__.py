"""Equation mini-language: parsing, aliases and capability checks."""

from compactlab.dsl.aliases import AliasEquation, alias_names, lookup_alias, resolve_equation
from compactlab.dsl.ast import Atom, EquationAST, Term, rescale_x
from compactlab.dsl.parser import EquationParseError, parse_equation
from compactlab.dsl.validate import (
    FluxTerm,
    ValidationReport,
    conservation_form,
    knn_order,
    recognize_family,
    validate,
)

__all__ = [
    "AliasEquation",
    "Atom",
    "EquationAST",
    "EquationParseError",
    "FluxTerm",
    "Term",
    "ValidationReport",
    "alias_names",
    "conservation_form",
    "knn_order",
    "lookup_alias",
    "parse_equation",
    "recognize_family",
    "rescale_x",
    "resolve_equation",
    "validate",
]
