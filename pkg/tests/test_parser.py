"""Parser behaviour for the equation mini-language."""

from __future__ import annotations

from fractions import Fraction

import pytest

from compactlab.dsl import (
    Atom,
    EquationParseError,
    Term,
    lookup_alias,
    parse_equation,
    rescale_x,
    resolve_equation,
)

ALIASES = ["KdV", "MKdV", "MKdV6", "K22", "Knm:3,2", "NLS:3", "NLS:4", "SG", "K212", "CurvKdV"]


def test_k22_has_three_terms_with_outer_derivatives():
    ast = parse_equation("u_t + (u^2)_x + (u^2)_xxx = 0")

    assert len(ast.terms) == 3
    assert ast.terms[0] == Term(Fraction(1), (Atom(t_order=1),))
    assert ast.terms[1] == Term(Fraction(1), (Atom(power=2),), outer_x_order=1)
    assert ast.terms[2] == Term(Fraction(1), (Atom(power=2),), outer_x_order=3)


def test_single_time_term_is_accepted():
    ast = parse_equation("u_t = 0")
    assert len(ast.terms) == 1
    assert ast.time_term.atoms == (Atom(t_order=1),)


def test_sine_gordon_parses_mixed_derivative_and_negative_sine():
    ast = parse_equation("u_xt - sin(u) = 0")

    assert ast.terms[0].atoms == (Atom(t_order=1, x_order=1),)
    assert ast.terms[1].transcendental == "sin"
    assert ast.terms[1].coefficient == -1


def test_subscript_letter_order_is_irrelevant():
    assert parse_equation("u_tx - sin(u) = 0") == parse_equation("u_xt - sin(u) = 0")


def test_products_merge_equal_factors():
    ast = parse_equation("u_t + u*u*u_x = 0")
    assert ast.terms[1].atoms == (Atom(power=2), Atom(x_order=1))


def test_rational_and_symbolic_coefficients():
    ast = parse_equation("u_t + 3/2*eps*u*u_x = 0", parameters={"eps"})

    term = ast.terms[1]
    assert term.coefficient == Fraction(3, 2)
    assert term.symbol == "eps"
    assert ast.symbols == frozenset({"eps"})


@pytest.mark.parametrize("name", ALIASES)
def test_every_alias_round_trips_through_printing(name):
    ast = resolve_equation(name)
    reparsed = parse_equation(ast.to_text(), parameters=ast.parameters)
    assert reparsed == ast


@pytest.mark.parametrize(
    "text",
    [
        "-u_t + 2*u_x = 0",
        "u_t - 1/3*(u^3)_xx + 0.5*u_xxxxx = 0",
        "u_t + (u*u_x)_xx = 0",
        "u_t + u^2*u_x^2 - cos(u) = 0",
    ],
)
def test_printing_is_reparseable(text):
    ast = parse_equation(text)
    assert parse_equation(ast.to_text()) == ast


def test_alias_lookup_is_case_insensitive():
    assert lookup_alias("k22") == lookup_alias("K22")
    assert lookup_alias("u_t = 0") is None


def test_alias_declares_its_parameters():
    ast = resolve_equation("K212")
    assert "eps" in ast.parameters
    assert ast.symbols == frozenset({"eps"})


@pytest.mark.parametrize(
    "text, kind, offset",
    [
        ("u_t + v_x = 0", "unsupported", 6),
        ("u_t + eps*u_xxx = 0", "undeclared", 6),
        ("u_t + u_xxxxxxx = 0", "unsupported", 6),
        ("u_t + * u = 0", "syntax", 6),
        ("u_t + u_x = 1", "syntax", 12),
        ("u_t + u_x # 0", "syntax", 10),
        ("u_tt + u_xx = 0", "unsupported", 0),
        ("u_t + u_xt = 0", "unsupported", 6),
    ],
)
def test_errors_carry_kind_and_offset(text, kind, offset):
    with pytest.raises(EquationParseError) as excinfo:
        parse_equation(text)

    assert excinfo.value.kind == kind
    assert excinfo.value.offset == offset
    assert f"at offset {offset}" in str(excinfo.value)


def test_parameter_must_lead_its_term():
    with pytest.raises(EquationParseError, match="must lead its term"):
        parse_equation("u_t + u*eps = 0", parameters={"eps"})


def test_max_order_is_configurable():
    with pytest.raises(EquationParseError, match="exceeds maximum 3"):
        parse_equation("u_t + u_xxxx = 0", max_order=3)


def test_equation_without_time_term_is_rejected():
    with pytest.raises(EquationParseError, match="time-derivative"):
        parse_equation("u_xx + u = 0")


def test_rescale_multiplies_by_power_of_x_derivatives():
    scaled = rescale_x(resolve_equation("KdV"), 2)

    assert [term.coefficient for term in scaled.terms] == [1, 12, 8]
    assert parse_equation(scaled.source_text) == scaled
