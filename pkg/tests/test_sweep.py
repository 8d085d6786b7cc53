from __future__ import annotations

import math

import pytest

from compactlab.dsl import resolve_equation
from compactlab.similarity import CurveTable, build_relation, level_crossings, sweep, sweep_law
from compactlab.similarity.sweep import CurvePoint

# V*L^2 - 2*A*L^2 - 8*A = 0, so L^2 = 8*A/(V - 2*A)
K22_FALLING = (1, -1, -1)


@pytest.fixture
def k22():
    return build_relation(resolve_equation("K22"))


def test_csv_marks_missing_roots():
    table = CurveTable(
        (
            CurvePoint(1.0, 2.0, (1, 1, -1), (0.5,)),
            CurvePoint(1.0, 2.0, (1, 1, 1), ()),
        )
    )

    assert table.to_csv() == "A,V,branch,L1\n1,2,++-,0.5\n1,2,+++,none\n"


def test_csv_pads_to_widest_row():
    table = CurveTable(
        (
            CurvePoint(0.25, -1.0, (1,), (0.1, 0.2)),
            CurvePoint(0.25, 1.0, (1,), (0.3,)),
        )
    )
    lines = table.to_csv().splitlines()

    assert lines[0] == "A,V,branch,L1,L2"
    assert lines[2] == "0.25,1,+,0.29999999999999999,"


def test_sweep_rows_follow_input_order(k22):
    table = sweep(k22, [1.0, 2.0], (3.0, 5.0), 3, branch_list=[K22_FALLING], jobs=1)

    assert [(p.amplitude, p.velocity) for p in table.points] == [
        (1.0, 3.0),
        (1.0, 4.0),
        (1.0, 5.0),
        (2.0, 3.0),
        (2.0, 4.0),
        (2.0, 5.0),
    ]
    assert table.points[1].roots == pytest.approx((2.0,))


def test_sweep_defaults_to_every_branch(k22):
    table = sweep(k22, [1.0], (1.0, 2.0), 2, jobs=1)
    assert len(table) == 2 * 8


def test_parallel_sweep_matches_serial(k22):
    serial = sweep(k22, [0.5, 1.0, 1.5], (-4.0, 4.0), 9, jobs=1)
    parallel = sweep(k22, [0.5, 1.0, 1.5], (-4.0, 4.0), 9, jobs=2)
    assert parallel == serial


def test_sweep_rejects_bad_input(k22):
    with pytest.raises(ValueError):
        sweep(k22, [1.0], (0.0, 1.0), 0)
    with pytest.raises(ValueError):
        sweep(k22, [0.0], (0.0, 1.0), 4)


def test_linear_velocity_law_gives_constant_width(k22):
    table = sweep_law(k22, [0.5, 1.0, 2.0, 4.0], alpha=4.0, branch_list=[K22_FALLING], jobs=1)

    for point in table.points:
        assert point.roots == pytest.approx((2.0,), rel=1e-12)


@pytest.mark.parametrize("amplitude", [1.0, 2.0])
def test_level_crossing_recovers_constant_width_velocity(k22, amplitude):
    level = 1.5
    table = sweep(k22, [amplitude], (0.0, 20.0), 401, branch_list=[K22_FALLING], jobs=1)

    crossings = level_crossings(table, level)

    assert len(crossings) == 1
    expected = 2 * amplitude + 8 * amplitude / level**2
    assert crossings[0].velocity == pytest.approx(expected, abs=1e-3)
    assert crossings[0].root_index == 0


def test_level_exactly_on_a_sample_is_reported_once(k22):
    table = sweep(k22, [1.0], (0.0, 20.0), 41, branch_list=[K22_FALLING], jobs=1)

    crossings = level_crossings(table, 2.0)

    assert [c.velocity for c in crossings] == [4.0]
    assert math.isclose(table.points[8].roots[0], 2.0)
