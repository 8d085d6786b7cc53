"""Periodic K(n,m) integration: stepping, conservation, blow-up and configuration."""

from __future__ import annotations

import numpy as np
import pytest

from compactlab.simulator import (
    BlowUpError,
    SimConfig,
    SimState,
    auto_dt,
    initial_profile,
    rhs,
    run,
    step,
)


def _config(**overrides) -> SimConfig:
    fields = {"length": 40.0, "points": 128, "t_end": 0.5, "output_stride": 200}
    fields.update(overrides)
    return SimConfig(**fields)


def test_config_requires_power_of_two_grid():
    with pytest.raises(ValueError, match="power of two"):
        _config(points=100)


def test_config_rejects_non_conservation_equations():
    with pytest.raises(ValueError, match="conservation form"):
        _config(equation="SG")
    with pytest.raises(ValueError, match="conservation form"):
        _config(equation="u_t + eps*(u_xx^2)_x = 0", params={"eps": 0.1})


def test_config_binds_flux_parameters():
    config = _config(equation="K212", params={"eps": 0.5})
    assert sorted(config.fluxes) == [(0.5, 3, 2), (1.0, 1, 2), (1.0, 3, 1)]
    with pytest.raises(ValueError, match="unbound parameter"):
        _config(equation="K212")


def test_convective_product_counts_as_flux():
    config = _config(equation="KdV")
    assert sorted(config.fluxes) == [(1.0, 3, 1), (3.0, 1, 2)]


def test_default_hyperviscosity_scales_with_dx_squared():
    config = _config()
    assert config.mu == pytest.approx(1e-4 * (40.0 / 128) ** 2)
    assert _config(hyperviscosity=0.0).mu == 0.0


def test_auto_dt_follows_cubic_cfl_law():
    config = _config()
    u = initial_profile("compacton", config.grid())
    expected = 0.1 * config.dx**3 / 4.0
    assert auto_dt(u, config.dx, config.fluxes, 0.1) == pytest.approx(expected)
    assert auto_dt(np.zeros(8), config.dx, config.fluxes, 0.1) == pytest.approx(
        0.1 * config.dx**3
    )


def test_zero_field_is_a_fixed_point():
    config = _config()
    state = SimState.initial(np.zeros(config.points), config.dx)
    for _ in range(5):
        state = step(state, config, dt=1e-3)
    assert np.all(state.u == 0.0)


def test_constant_field_stays_constant():
    config = _config()
    state = SimState.initial(np.full(config.points, 0.7), config.dx)
    mass0 = state.mass
    for _ in range(10):
        state = step(state, config, dt=1e-3)
    assert np.ptp(state.u) == 0.0
    assert state.mass == pytest.approx(mass0, rel=1e-12)


def test_single_small_step_barely_changes_the_compacton_peak():
    config = SimConfig(length=40.0, points=512, t_end=1.0)
    u0 = initial_profile("compacton", config.grid())
    state = step(SimState.initial(u0, config.dx), config, dt=1e-4)
    assert abs(state.u.max() - u0.max()) < 1e-6
    assert state.t == pytest.approx(1e-4)


def test_rhs_is_a_discrete_divergence():
    config = _config()
    rng = np.random.default_rng(3)
    u = rng.uniform(-1.0, 1.0, config.points)
    assert abs(rhs(u, config.dx, config.fluxes, config.mu).sum()) < 1e-9


def test_run_conserves_mass_and_keeps_snapshots():
    config = _config()
    u0 = initial_profile("compacton", config.grid())
    trace = run(u0, config)
    assert trace.snapshots[0].t == 0.0
    assert trace.final.t == pytest.approx(0.5)
    assert len(trace.snapshots) >= 2
    assert trace.max_mass_drift() < 1e-6
    assert not trace.blew_up
    diagnostics = trace.diagnostics().model_dump(mode="json")
    assert diagnostics["blew_up"] is False
    assert len(diagnostics["masses"]) == len(trace.snapshots)
    assert "message" not in diagnostics


def test_compacton_keeps_its_shape_over_a_short_run():
    config = SimConfig(length=40.0, points=256, t_end=0.5, output_stride=10_000)
    x = config.grid()
    trace = run(initial_profile("compacton", x), config)
    exact = initial_profile("compacton", x, center=0.75 * 0.5)
    assert np.max(np.abs(trace.final.u - exact)) < 1e-2
    (compacton,) = trace.final.inventory.compactons
    assert compacton.center == pytest.approx(0.375, abs=0.02)


def test_runs_are_deterministic():
    config = _config(t_end=0.2)
    u0 = initial_profile("stretched:2", config.grid())
    first = run(u0, config)
    second = run(u0, config)
    assert len(first.snapshots) == len(second.snapshots)
    for a, b in zip(first.snapshots, second.snapshots, strict=True):
        assert a.t == b.t
        assert np.array_equal(a.u, b.u)


def test_unstable_time_step_blows_up_with_diagnostics():
    config = _config(dt=0.05, t_end=5.0)
    u0 = initial_profile("compacton", config.grid())
    with pytest.raises(BlowUpError, match="blow-up") as excinfo:
        run(u0, config)
    error = excinfo.value
    assert error.trace.blew_up
    assert error.trace.snapshots[0].t == 0.0
    assert np.all(np.isfinite(error.state.u))
    assert error.state.t < 5.0


def test_auto_step_is_tightened_at_kept_states(monkeypatch):
    nominal = iter([0.05])

    def shrinking(u, dx, fluxes, cfl):
        return next(nominal, 0.01)

    monkeypatch.setattr("compactlab.simulator.integrate.auto_dt", shrinking)
    config = _config(t_end=0.2, output_stride=2)
    trace = run(np.zeros(config.points), config)
    times = [snapshot.t for snapshot in trace.snapshots]
    assert times == pytest.approx([0.0, 0.1, 0.12, 0.14, 0.16, 0.18, 0.2])
    assert trace.final.t == 0.2
    assert trace.dt == pytest.approx(0.01)


def test_fixed_step_is_never_replanned(monkeypatch):
    def unused(*args):
        raise AssertionError("auto_dt called for a fixed step")

    monkeypatch.setattr("compactlab.simulator.integrate.auto_dt", unused)
    config = _config(dt=0.05, t_end=0.2, output_stride=1)
    trace = run(np.zeros(config.points), config)
    assert [s.t for s in trace.snapshots] == pytest.approx([0.0, 0.05, 0.1, 0.15, 0.2])
    assert trace.dt == 0.05


def test_initial_field_must_match_grid():
    config = _config()
    with pytest.raises(ValueError, match="grid has 128"):
        run(np.zeros(64), config)


@pytest.mark.slow
def test_compacton_travels_at_its_speed():
    from compactlab.simulator import measure_speed

    config = SimConfig(length=80.0, points=512, t_end=40.0, output_stride=50_000)
    x = config.grid()
    u0 = initial_profile("compacton", x, center=-15.0)
    trace = run(u0, config)
    speed = measure_speed(u0, trace.final.u, config.dx, 40.0)
    assert speed == pytest.approx(0.75, rel=0.02)
    assert trace.max_mass_drift() < 1e-6


@pytest.mark.slow
def test_wide_initial_data_decomposes_into_compactons():
    config = SimConfig(length=160.0, points=1024, t_end=50.0, output_stride=20_000)
    x = config.grid()
    trace = run(initial_profile("stretched:3", x, center=-50.0), config)
    late = trace.final.inventory.resolved
    tall = [c for c in late if c.amplitude > 0.2]
    assert len(tall) >= 2
    for compacton in tall:
        assert compacton.speed is not None
        assert compacton.speed / compacton.amplitude == pytest.approx(0.75, rel=0.05)


@pytest.mark.slow
def test_narrow_initial_data_blows_up():
    config = SimConfig(length=80.0, points=1024, t_end=50.0, output_stride=20_000)
    with pytest.raises(BlowUpError):
        run(initial_profile("stretched:0.5", config.grid()), config)
