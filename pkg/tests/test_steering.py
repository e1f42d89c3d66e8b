import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hwmlwa.components import ControlState
from hwmlwa.steering import (
    Anchor,
    CalibrationConstants,
    CalibrationError,
    UnreachableTargetError,
    angular_error,
    calibrate,
    forward,
    loading_margin,
    nominal_state,
    reference_anchors,
    q_sensitivity,
    solve_2d,
    solve_theta,
    steering_map,
)

F = 31e9
angles = st.tuples(st.floats(-89, 89), st.floats(-89, 89))


@given(angles, angles)
def test_angular_error_is_a_symmetric_distance(a, b):
    d = angular_error(*a, *b)
    assert d >= 0 and d == pytest.approx(angular_error(*b, *a), abs=1e-9)
    assert angular_error(*a, *a) == pytest.approx(0.0, abs=1e-5)


@given(angles, angles, angles)
def test_angular_error_triangle_inequality(a, b, c):
    assert angular_error(*a, *c) <= angular_error(*a, *b) + angular_error(*b, *c) + 1e-6


def test_angular_error_values():
    assert angular_error(0, 0, 90, 0) == pytest.approx(90.0)
    # phi is measured inside the cone, so it shrinks with cos(theta)
    assert angular_error(60, 0, 60, 10) < 10


def test_nominal_state_is_geometric_mean(model):
    s = nominal_state(model)
    assert s.capacitances[0] == pytest.approx(math.sqrt(0.2e-12 * 1e-12))
    assert not any(s.diodes)


def test_calibrated_loading_margin_is_positive(model):
    assert loading_margin(model.cal, model) > 0


def test_solve_theta_hits_target(model):
    c = solve_theta(model, 10.0, F)
    assert forward(model, ControlState.uniform(c), F).theta_peak == pytest.approx(10.0, abs=1.0)


def test_solve_theta_unreachable_reports_interval(model):
    with pytest.raises(UnreachableTargetError) as exc:
        solve_theta(model, 80.0, F)
    lo, hi = exc.value.interval
    assert lo < hi < 80.0


def test_map_at_32ghz_has_117_entries_and_wide_span(model):
    m = steering_map(model, 32e9)
    assert len(m.entries) == 117
    assert m.theta_span >= 70
    assert m.hull


def test_map_deduplicates_grid(model):
    m = steering_map(model, F, [0.5e-12, 0.5e-12, 0.2e-12])
    assert len(m.entries) == 2 * 13
    with pytest.raises(ValueError):
        steering_map(model, F, [])


def test_map_mirror_symmetry(model):
    m = steering_map(model, F, [0.2e-12, 0.6e-12, 1e-12])
    by_key = {(e.state.capacitances[0], e.state.asymmetry): e for e in m.entries}
    for (c, k), e in by_key.items():
        assert by_key[c, -k].phi_peak == pytest.approx(-e.phi_peak, abs=1.0)


def test_zero_target_picks_symmetric_state(model):
    r = solve_2d(model, (0.0, 0.0), F)
    assert r.solution.state.asymmetry == 0
    assert abs(r.solution.phi_peak) <= 1.0
    assert r.error <= 1.0 and not r.nearest


def _grid_best(model, target):
    grid = np.linspace(0.2e-12, 1e-12, 5)
    return min(
        angular_error(e.theta_peak, e.phi_peak, *target)
        for e in steering_map(model, F, grid).entries
        if e.beam_valid
    )


@pytest.mark.parametrize("target", [(85.0, 0.0), (-80.0, 60.0)])
def test_unreachable_target_returns_flagged_nearest(model, target):
    r = solve_2d(model, target, F)
    assert r.nearest
    assert r.solution.beam_valid
    assert r.error <= _grid_best(model, target) + 1e-6


def test_q_limit_consistency(model):
    state = nominal_state(model)
    rows = q_sensitivity(model, [31e9], [1e6, math.inf], state)
    assert abs(rows[0]["delta_gain_db"]) <= 0.05
    assert rows[1]["delta_gain_db"] == 0.0
    with pytest.raises(ValueError):
        q_sensitivity(model, [31e9], [], state)


def test_calibrate_argument_checks(model):
    a = reference_anchors(model)
    with pytest.raises(ValueError):
        calibrate(model, [])
    with pytest.raises(ValueError):
        calibrate(model, a[:2])
    with pytest.raises(ValueError):
        calibrate(model, a, free=("c_gap", "nonsense"))


def test_calibrate_reports_unattainable_angle(model):
    # psi0 only rotates phi, so it cannot move theta onto this target
    impossible = Anchor(ControlState.uniform(0.2e-12), F, "theta", 80.0)
    with pytest.raises(CalibrationError) as exc:
        calibrate(model, [impossible], free=("psi0",), initial=model.cal, max_iter=200)
    assert exc.value.residuals


def test_anchor_validation():
    s = ControlState.uniform(0.5e-12)
    with pytest.raises(ValueError):
        Anchor(s, F, "beamwidth", 1.0)
    with pytest.raises(ValueError):
        Anchor(s, F, "theta", 1.0, kind="approx")


def test_calibration_constant_validation():
    with pytest.raises(ValueError):
        CalibrationConstants(g_leak=-1.0)
    with pytest.raises(ValueError):
        CalibrationConstants(sigma=1.5)


def test_forward_rejects_out_of_range_state(model):
    with pytest.raises(ValueError):
        forward(model, ControlState.uniform(2e-12), F)


def test_solution_flags(model):
    sol = forward(model, nominal_state(model), F)
    assert sol.beam_valid and sol.harmonic == -1 and not sol.flags
    low_leak = model.with_cal(replace(model.cal, g_leak=0.0))
    assert forward(low_leak, nominal_state(model), F).alpha_over_k0 < sol.alpha_over_k0
