"""Dyadic compacton/KAK frame: elements, index algebra, expansions and squares."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from compactlab.frame import (
    FrameElement,
    FrameExpansion,
    KakPiece,
    children,
    dilated_kak,
    elements,
    elements_in_window,
    eta_eval,
    expand,
    fine_index,
    frame_bounds,
    kak_profile,
    partition_defect,
    ramp_width,
    reconstruction_csv,
    refine,
    square_expand,
    two_scale_check,
)


def test_unit_compacton_peaks_at_its_midpoint():
    assert float(eta_eval(FrameElement(k=0, j=0), 0.5)) == pytest.approx(1.0, abs=1e-15)


def test_coarse_element_is_a_kak_with_unit_plateau():
    values = eta_eval(FrameElement(k=0, j=-1), np.linspace(0.5, 1.5, 11))
    np.testing.assert_allclose(values, 1.0, rtol=0, atol=1e-15)
    assert FrameElement(k=0, j=-1).flat_length == 1.0


def test_fine_element_vanishes_outside_its_cell():
    element = FrameElement(k=3, j=2)
    assert element.support == (0.75, 1.0)
    assert float(element(0.2)) == 0.0
    assert float(element(0.875)) == pytest.approx(1.0)


def test_elements_are_exactly_zero_off_support():
    x = np.linspace(-3.0, 6.0, 9001)
    for element in (FrameElement(k=1, j=-1), FrameElement(k=0, j=0), FrameElement(k=5, j=3)):
        lo, hi = element.support
        outside = (x < lo) | (x > hi)
        assert np.all(element(x)[outside] == 0.0)


def test_same_scale_elements_do_not_overlap():
    for j in (-2, 0, 3):
        a, b = FrameElement(k=0, j=j), FrameElement(k=1, j=j)
        assert not a.overlaps(b)


def test_kak_profile_geometry():
    assert float(kak_profile(0.5, 0.0)) == pytest.approx(0.5)
    assert float(kak_profile(2.0, 3.0)) == 1.0
    assert float(kak_profile(4.5, 3.0)) == pytest.approx(0.5)
    assert float(kak_profile(-0.1, 3.0)) == 0.0
    with pytest.raises(ValueError, match="plateau"):
        kak_profile(0.0, -1.0)


@pytest.mark.parametrize("j", [-3, -1, 0, 1, 4])
@pytest.mark.parametrize("k", [-2, 0, 5])
def test_two_scale_identity_holds_at_every_scale(j, k):
    assert two_scale_check(j, k) < 1e-12


def test_shifted_child_breaks_the_two_scale_identity():
    assert two_scale_check(0, 0, shift=2) > 0.5


def _too_narrow(x, j, offset, flat=0.0):
    return kak_profile(np.asarray(x, dtype=float) / ramp_width(j + 1) - offset, flat)


def _untranslated(x, j, offset, flat=0.0):
    return kak_profile(np.asarray(x, dtype=float) / ramp_width(j), flat)


@pytest.mark.parametrize("wrong", [_too_narrow, _untranslated])
@pytest.mark.parametrize("j", [0, 2, 4])
def test_two_scale_check_catches_a_wrong_dilation(monkeypatch, wrong, j):
    monkeypatch.setattr(elements, "dilated_kak", wrong)
    assert two_scale_check(j, 3) > 0.5


@pytest.mark.parametrize("j", [1, 3])
@pytest.mark.parametrize("k", [-2, 0, 5])
def test_fine_elements_are_dilated_compactons(j, k):
    element = FrameElement(k=k, j=j)
    x = np.linspace(element.support[0] - 0.1, element.support[1] + 0.1, 501)
    np.testing.assert_array_equal(dilated_kak(x, j, 2 * k), element(x))
    assert refine(element) == [KakPiece(j=j, offset=2 * k)]


@pytest.mark.parametrize("k, j, count", [(0, 0, 1), (0, -1, 3), (1, -2, 7)])
def test_refined_pieces_sum_to_the_element(k, j, count):
    element = FrameElement(k=k, j=j)
    pieces = refine(element)
    assert len(pieces) == count
    assert pieces[0].support[0] == element.support[0]
    assert pieces[-1].support[1] == element.support[1]
    x = np.linspace(element.support[0] - 0.5, element.support[1] + 0.5, 4001)
    np.testing.assert_allclose(sum(piece(x) for piece in pieces), element(x), atol=1e-14)


@pytest.mark.parametrize("j", [-2, 0, 3])
def test_overlapping_ramps_partition_unity(j):
    assert partition_defect(j, (-3, 4)) < 1e-12


def test_partition_needs_two_elements():
    with pytest.raises(ValueError):
        partition_defect(0, (1, 1))


def test_children_examples():
    assert children(0, 0, 2) == [0, 1, 2, 3]
    assert children(5, 3, 3) == [5]
    assert children(1, 0, 3) == list(range(8, 16))
    assert fine_index(1, [1, 0]) == 6


def test_children_require_a_finer_scale():
    with pytest.raises(ValueError, match="finer scale"):
        children(0, 2, 1)
    with pytest.raises(ValueError, match="binary digit"):
        fine_index(0, [2])


def test_children_match_brute_force_overlap():
    for j in range(6):
        for j_fine in range(j, 6):
            depth = 2 ** (j_fine - j)
            for k in range(-16, 17):
                coarse = FrameElement(k=k, j=j)
                candidates = range(k * depth - 2, (k + 1) * depth + 2)
                expected = [
                    kf for kf in candidates if coarse.overlaps(FrameElement(k=kf, j=j_fine))
                ]
                assert children(k, j, j_fine) == expected


def test_elements_in_window():
    assert [e.k for e in elements_in_window((0.0, 2.0), 1)] == [0, 1, 2, 3]
    assert [e.k for e in elements_in_window((-1.0, 4.0), -1)] == [0, 1]
    assert elements_in_window((0.0, 1.5), -1) == []


@pytest.mark.parametrize("method", ["greedy", "projection"])
def test_expanding_a_frame_element_recovers_it(method):
    expansion = expand(FrameElement(k=0, j=0), 0, 2, window=(0.0, 2.0), method=method)
    assert expansion.coefficient(0, 0) == pytest.approx(1.0, abs=1e-10)
    others = [t.c for t in expansion.terms if (t.k, t.j) != (0, 0)]
    assert max(abs(c) for c in others) < 1e-10
    assert expansion.l2_error < 1e-10
    assert expansion.method == method


def test_kak_element_is_its_own_coefficient():
    expansion = expand(FrameElement(k=0, j=-1), -1, 1, window=(0.0, 2.0))
    assert expansion.coefficient(0, -1) == pytest.approx(1.0, abs=1e-10)
    assert expansion.l2_error < 1e-10


def test_refinement_reduces_gaussian_error():
    x = np.linspace(-8.0, 8.0, 4097)
    values = np.exp(-(x**2))
    errors = [expand((x, values), 0, j_max).l2_error for j_max in (0, 1, 2)]
    assert errors[0] > errors[1] > errors[2]


def test_expansion_of_a_reconstruction_is_stable():
    rng = np.random.default_rng(7)
    window = (0.0, 4.0)
    coefficients = {
        (e.k, e.j): float(rng.normal()) for j in (0, 1) for e in elements_in_window(window, j)
    }
    original = FrameExpansion.from_coefficients(coefficients)
    x = np.linspace(*window, 1025)
    again = expand((x, original.reconstruct(x)), 0, 1)
    for term in original.terms:
        assert again.coefficient(term.k, term.j) == pytest.approx(term.c, abs=1e-10)


def test_expand_rejects_data_outside_the_window():
    with pytest.raises(ValueError, match="support exceeds window"):
        expand(FrameElement(k=0, j=0), 0, 1, window=(0.0, 0.5))
    x = np.linspace(-1.0, 2.0, 3001)
    with pytest.raises(ValueError, match="support exceeds window"):
        expand((x, FrameElement(k=0, j=0)(x)), 0, 1, window=(0.0, 0.75))


def test_expand_argument_errors():
    with pytest.raises(ValueError, match="window is required"):
        expand(FrameElement(k=0, j=0), 0, 1)
    with pytest.raises(ValueError, match="empty scale range"):
        expand(FrameElement(k=0, j=0), 2, 1, window=(0.0, 1.0))
    with pytest.raises(ValueError, match="too coarse"):
        x = np.linspace(0.0, 2.0, 5)
        expand((x, np.zeros(5)), 0, 1)


def test_expansion_validation():
    with pytest.raises(ValueError, match="duplicate"):
        FrameExpansion(j_min=0, j_max=0, terms=[{"k": 0, "j": 0, "c": 1}, {"k": 0, "j": 0, "c": 2}])
    with pytest.raises(ValueError, match="outside the scale range"):
        FrameExpansion(j_min=0, j_max=0, terms=[{"k": 0, "j": 1, "c": 1}])


def test_expansion_serialization():
    expansion = FrameExpansion.from_coefficients({(0, 0): 1.0})
    assert expansion.coefficients_json() == [{"k": 0, "j": 0, "c": 1.0}]
    assert "l2_error" not in expansion.model_dump()
    assert reconstruction_csv(expansion, np.array([0.5, 2.0])) == "x,u\n0.5,1\n2,0\n"


def test_frame_bounds():
    single = frame_bounds(0, 0, (0.0, 4.0))
    assert single.elements == 4
    assert single.lower == pytest.approx(1.0, abs=1e-12)
    assert single.ratio == pytest.approx(1.0, abs=1e-12)
    mixed = frame_bounds(-1, 1, (0.0, 4.0))
    assert mixed.elements == 2 + 4 + 8
    assert mixed.lower > 0
    assert 1.0 < mixed.ratio < np.inf


def test_square_of_a_single_element():
    square = square_expand(FrameExpansion.from_coefficients({(0, 0): 1.0}))
    assert len(square.self_terms) == 1
    assert square.cross_terms == []
    x = np.linspace(-0.5, 1.5, 101)
    np.testing.assert_allclose(square(x), FrameElement(k=0, j=0)(x) ** 2, atol=1e-15)


def test_disjoint_elements_have_no_cross_terms():
    square = square_expand(FrameExpansion.from_coefficients({(0, 1): 1.0, (1, 1): 2.0}))
    assert square.cross_terms == []
    assert len(square.self_terms) == 2


def test_cross_terms_pair_coarse_elements_with_children():
    square = square_expand(FrameExpansion.from_coefficients({(0, 0): 1.0, (1, 2): 0.5}))
    assert square.candidates[(0, 0, 2)] == 4
    (cross,) = square.cross_terms
    assert cross.left == KakPiece(j=0, offset=0)
    assert cross.right == FrameElement(k=1, j=2)
    assert cross.weight == pytest.approx(1.0)


def test_coarse_kak_is_refined_before_multiplying():
    square = square_expand(FrameExpansion.from_coefficients({(0, -1): 2.0, (1, 1): 0.5}))
    assert square.candidates[(0, -1, 1)] == 4
    refined = [(term.left.offset, term.weight) for term in square.cross_terms]
    assert refined == [(0, 2.0), (1, 2.0)]
    assert all(term.right == FrameElement(k=1, j=1) for term in square.cross_terms)
    x = np.linspace(-0.5, 2.5, 3001)
    coarse, fine = FrameElement(k=0, j=-1)(x), FrameElement(k=1, j=1)(x)
    np.testing.assert_allclose(square(x), (2.0 * coarse + 0.5 * fine) ** 2, atol=1e-12)


def test_square_matches_direct_squaring():
    rng = np.random.default_rng(11)
    window = (0.0, 4.0)
    pool = [(e.k, e.j) for j in (-1, 0, 1, 2) for e in elements_in_window(window, j)]
    x = np.linspace(-0.5, 4.5, 10_000)
    for _ in range(50):
        picks = rng.choice(len(pool), size=5, replace=False)
        expansion = FrameExpansion.from_coefficients(
            {pool[i]: float(rng.normal()) for i in picks}
        )
        square = square_expand(expansion)
        direct = expansion.reconstruct(x) ** 2
        assert np.max(np.abs(square(x) - direct)) < 1e-10
        for (k, j, j_fine), count in square.candidates.items():
            assert count == 2 ** (j_fine - j)


def test_children_enumeration_covers_every_digit_string():
    for digits in itertools.product((0, 1), repeat=3):
        assert fine_index(2, digits) in children(2, 0, 3)
