"""Qualitative laws read off similarity relations."""

from __future__ import annotations

import sympy as sp

from compactlab.dsl import parse_equation, resolve_equation
from compactlab.similarity import build_relation, classify
from compactlab.similarity.classify import L0
from compactlab.similarity.relation import A, L, parameter_symbol


def _classify(name: str, **kwargs):
    return classify(build_relation(resolve_equation(name)), **kwargs)


def test_kdv_width_is_constant_only_with_offset():
    report = _classify("KdV")
    law = report.constant_width_law

    assert law is not None
    assert law.alpha == -6
    assert law.power == 1
    assert sp.simplify(law.beta + 1 / L0**2) == 0
    assert report.velocity_law is None


def test_k22_has_a_pure_velocity_law():
    report = _classify("K22")
    law = report.constant_width_law

    assert law is not None
    assert law.beta == 0
    assert sp.simplify(law.alpha - (-2 - 8 / L0**2)) == 0
    assert report.velocity_law is not None
    assert report.velocity_law[1] == 1


def test_k22_has_no_rest_amplitude():
    assert _classify("K22").rest_amplitude is None


def test_kdv_rest_amplitude():
    report = _classify("KdV")
    assert report.rest_amplitude is not None
    assert sp.simplify(report.rest_amplitude[0] + 1 / (6 * L**2)) == 0


def test_k212_rest_amplitude_depends_on_eps():
    report = _classify("K212")
    eps = parameter_symbol("eps")

    assert report.rest_amplitude is not None
    assert sp.simplify(report.rest_amplitude[0] + 1 / (2 * L**2 + 8 * eps)) == 0


def test_nls_bifurcates_at_quarter_amplitude():
    bifurcation = _classify("NLS:4").bifurcation

    assert bifurcation is not None
    assert bifurcation.critical_amplitudes == [sp.Rational(1, 4)]
    assert bifurcation.multiplicity == 2


def test_curvature_discriminant_stays_symbolic():
    bifurcation = _classify("CurvKdV").bifurcation
    eps = parameter_symbol("eps")

    assert bifurcation is not None
    assert sp.simplify(bifurcation.discriminant - (1 - 16 * eps * A**2)) == 0


def test_bound_curvature_parameter_gives_positive_threshold():
    bifurcation = _classify("CurvKdV", params={"eps": 0.05}).bifurcation

    assert bifurcation is not None
    assert bifurcation.critical_amplitudes == [sp.sqrt(5) / 2]


def test_degenerate_and_transcendental_relations_only_get_notes():
    degenerate = classify(build_relation(parse_equation("u_t = 0")))
    assert degenerate.degenerate
    assert degenerate.notes

    sine = _classify("SG")
    assert not sine.degenerate
    assert sine.constant_width_law is None
    assert "transcendental" in sine.notes[0]


def test_report_serializes_expressions_as_text():
    payload = _classify("K22").model_dump(mode="json")

    assert payload["branch"] == "+++"
    assert payload["constant_width_law"]["beta"] == "0"
    assert payload["constant_width_law"]["power"] == 1
    assert isinstance(payload["velocity_law"][0], str)
    assert payload["rest_amplitude"] is None
