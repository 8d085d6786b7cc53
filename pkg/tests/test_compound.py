"""Compacton-on-KAK compounds: couplings, placement, window and junction smoothness."""

from __future__ import annotations

import math

import numpy as np
import pytest

from compactlab.closed_forms import (
    composite_jumps,
    compose_compound,
    junction_jumps,
    k22_compacton,
    k22_kak,
    k22_offset_compacton,
    kdv_soliton,
)


def test_top_compacton_on_kak_plateau():
    kak = k22_kak(0.75, 20.0)
    compound = compose_compound(kak, k22_compacton(0.75), 0.0)
    assert compound.family == "K22CompOnKAK"
    assert compound.secondary_velocity == pytest.approx(2.25)
    assert compound.top_amplitude == pytest.approx(1.0)
    start, end = compound.window()
    assert start == 0.0
    assert end == pytest.approx((20.0 - 4 * math.pi) / 1.5)
    assert float(compound.evaluate(2 * math.pi)) == pytest.approx(2.0)
    assert float(compound.evaluate(15.0)) == pytest.approx(1.0)


def test_offset_compacton_top_with_matching_coupling():
    kak = k22_kak(0.75, 20.0)
    top = k22_offset_compacton(1.0, kak.amplitude)
    compound = compose_compound(kak, top, 2.0)
    assert compound.secondary_velocity == pytest.approx(top.velocity)
    x = np.linspace(0.5, 18.0, 301)
    t = 1.0
    inside = np.abs(x - top.velocity * t - 2.0 - 2 * math.pi) <= 2 * math.pi
    np.testing.assert_allclose(
        compound.evaluate(x, t)[inside],
        top.evaluate(x[inside] - 2.0 - 2 * math.pi, t),
        atol=1e-12,
    )


def test_top_compacton_ends_at_ramp_when_placed_last():
    kak = k22_kak(0.75, 20.0)
    compound = compose_compound(kak, k22_compacton(0.75), 20.0 - 4 * math.pi)
    assert compound.window()[1] == pytest.approx(0.0, abs=1e-12)
    assert max(compound.breakpoints()) == pytest.approx(20.0 + 2 * math.pi)
    assert float(compound.evaluate(20.0)) == pytest.approx(1.0)


def test_window_is_positive_and_finite():
    compound = compose_compound(k22_kak(0.75, 20.0), k22_compacton(0.75), 0.0)
    end = compound.window()[1]
    assert 0.0 < end < math.inf
    assert end == pytest.approx(4.9557, abs=1e-4)


def test_evaluating_outside_window_warns(caplog):
    compound = compose_compound(k22_kak(0.75, 20.0), k22_compacton(0.75), 0.0)
    compound.evaluate(0.0, t=10.0)
    assert "outside its validity window" in caplog.text


@pytest.mark.parametrize("delta", [0.0, 1.5, 20.0 - 4 * math.pi])
def test_junctions_are_smooth_in_u_squared(delta):
    compound = compose_compound(k22_kak(0.75, 20.0), k22_compacton(0.75), delta)
    jumps = junction_jumps(compound)
    assert len(jumps) >= 4
    assert max(jumps) < 1e-3


def test_kink_in_the_composite_is_measured():
    (jump,) = composite_jumps(lambda x: np.clip(x, 0.0, None) ** 1.5, [0.0])
    assert jump == pytest.approx(6.0, rel=1e-6)


def test_wrong_background_level_breaks_the_coupling():
    kak = k22_kak(0.75, 20.0)
    with pytest.raises(ValueError, match="velocity coupling"):
        compose_compound(kak, k22_offset_compacton(1.0, 0.5), 0.0)


def test_top_that_does_not_fit_is_rejected():
    with pytest.raises(ValueError, match="does not fit"):
        compose_compound(k22_kak(0.75, 10.0), k22_compacton(0.75), 0.0)
    with pytest.raises(ValueError, match="delta >= 0"):
        compose_compound(k22_kak(0.75, 20.0), k22_compacton(0.75), -1.0)


def test_base_must_be_a_kak():
    with pytest.raises(ValueError, match="K22KAK"):
        compose_compound(k22_compacton(0.75), k22_compacton(0.75), 0.0)
    with pytest.raises(ValueError, match="K\\(2,2\\) compacton"):
        compose_compound(k22_kak(0.75, 20.0), kdv_soliton(1.0), 0.0)
