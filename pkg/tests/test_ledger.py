from __future__ import annotations

import pytest

from compactlab.dsl import parse_equation, resolve_equation
from compactlab.similarity import ledger_for, reference_ledger
from compactlab.similarity.ledger import (
    HALF_WIDTH_ROWS,
    REFERENCE_ROWS,
    check_half_width,
    check_row,
    knn_matches_k22,
)

EXPECTED_AGREEMENT = {
    ("KdV", "KdV"): True,
    ("MKdV", "MKdV"): False,
    ("MKdV6", "MKdV6"): True,
    ("K(2,2)", "K22"): True,
    ("K(n,n)", "Knm:2,2"): False,
    ("K(n,n)", "Knm:3,3"): False,
    ("K(n,m)", "Knm:2,3"): False,
    ("NLS(n)", "NLS:4"): False,
    ("sine-Gordon", "SG"): True,
    ("K(2,1,2)", "K212"): False,
    ("curvature KdV", "CurvKdV"): True,
    ("K(n,n) compacton", "Knm:2,2"): False,
    ("K(n,n) compacton", "Knm:3,3"): False,
}


@pytest.fixture(scope="module")
def ledger():
    return reference_ledger()


def test_every_reference_row_is_checked(ledger):
    assert {(entry.family, entry.alias) for entry in ledger} == set(EXPECTED_AGREEMENT)
    assert all(entry.checked_points > 0 for entry in ledger)


@pytest.mark.parametrize("key, agrees", sorted(EXPECTED_AGREEMENT.items()))
def test_agreement_flags(ledger, key, agrees):
    (entry,) = [e for e in ledger if (e.family, e.alias) == key]
    assert entry.agrees is agrees


def test_disagreements_carry_a_note(ledger):
    for entry in ledger:
        if not entry.agrees:
            assert entry.note


def test_entries_show_engine_text(ledger):
    (kdv,) = [e for e in ledger if e.alias == "KdV"]
    assert kdv.engine_width == "L = 1/sqrt(|±V ± 6*A|)"
    assert kdv.printed_width == kdv.engine_width


def test_parametrized_rows_record_their_bindings(ledger):
    (k212,) = [e for e in ledger if e.alias == "K212"]
    assert k212.params == {"eps": 0.1}


def test_ledger_for_matches_by_structure():
    families = [entry.family for entry in ledger_for(resolve_equation("K22"))]
    assert families == ["K(2,2)", "K(n,n)", "K(n,n) compacton"]
    assert ledger_for(parse_equation("u_t + u_x = 0")) == []


def test_parameter_override_reaches_the_check():
    (row,) = [r for r in REFERENCE_ROWS if r.alias == "CurvKdV"]
    entry = check_row(row, {"eps": -0.02})

    assert entry.params == {"eps": -0.02}
    assert entry.agrees


def test_knn_at_two_reduces_to_k22():
    assert knn_matches_k22()


@pytest.mark.parametrize("order, printed, implemented", [(2, 8.0, 4.0), (3, 6.0, 3.0)])
def test_knn_half_width_is_recorded_as_a_discrepancy(order, printed, implemented):
    (row,) = [r for r in HALF_WIDTH_ROWS if r.order == order]
    entry = check_half_width(row)

    assert not entry.agrees
    assert entry.printed_width == f"L = 4n/(n-1) = {printed:g}"
    assert entry.engine_width == f"L = 2n/(n-1) = {implemented:g}"
    assert entry.checked_points == 3
    assert "2n/(n-1)" in entry.note
