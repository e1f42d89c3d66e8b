import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hwmlwa.components import ControlState, DeviceSpecs, DiodeSpec, VaractorSpec
from hwmlwa.dispersion import (
    AntennaGeometry,
    antenna_two_port,
    cell_dispersion,
    dispersion_sample,
    edge_field_ratio,
    harmonic_angles,
    power_budget,
    transverse_root,
)
from hwmlwa.steering import CalibrationConstants
from hwmlwa.twoport import C0, SubstrateSpec

from oracles import tau_root_mp

GEOM = AntennaGeometry()
CAL = CalibrationConstants()
SPECS = DeviceSpecs()

caps12 = st.lists(st.floats(0.2e-12, 1e-12), min_size=12, max_size=12)
bits12 = st.lists(st.booleans(), min_size=12, max_size=12)
band = st.floats(28e9, 34e9)


def test_minus_one_harmonic_angle():
    # frozen: asin((893.6 - 2 pi / 5 mm) / k0) at 31 GHz
    h = {x.n: x for x in harmonic_angles(893.6, 0.0, 31e9, 5e-3)}
    assert h[-1].theta_n == pytest.approx(-33.97051302655836, abs=1e-9)
    assert h[-1].radiating and not h[0].radiating and math.isnan(h[0].theta_n)


def test_transverse_root_matches_oracle():
    tau = transverse_root(2.25e-3, 1382.0)
    assert tau == pytest.approx(-1.894384523732891e6, rel=1e-9)
    assert tau == pytest.approx(tau_root_mp(2.25e-3, 1382.0), rel=1e-9)


def test_unloaded_edge_is_quarter_wave_resonance():
    w = 2.5e-3
    assert transverse_root(w, 0.0) == pytest.approx((math.pi / (2 * w)) ** 2)
    with pytest.raises(ValueError):
        transverse_root(w, -1.0)


@given(st.floats(1e-3, 3e-3), st.floats(0.0, 5e3), st.floats(1.0, 5e3))
def test_transverse_root_decreases_with_loading(w, chi, dchi):
    assert transverse_root(w, chi + dchi) < transverse_root(w, chi)


def test_edge_field_ratio_continuous_through_zero():
    w = 2.5e-3
    assert edge_field_ratio(0.0, w) == 1.5
    assert edge_field_ratio(1e-3, w) == pytest.approx(1.5, rel=1e-6)
    assert edge_field_ratio(-1e-3, w) == pytest.approx(1.5, rel=1e-6)
    assert edge_field_ratio((math.pi / (2 * w)) ** 2, w) == pytest.approx(1.0, rel=1e-12)


@given(st.floats(0.2e-12, 1e-12), st.floats(28e9, 34e9))
def test_beta_identity(c, f):
    cell = ControlState.uniform(c).cells[2]
    cd = cell_dispersion(GEOM, cell, CAL, f, SPECS)
    k0 = 2 * math.pi * f / C0
    if not cd.evanescent:
        assert cd.beta**2 == pytest.approx(cd.eps_eff * k0 * k0 - cd.tau, rel=1e-9)


@given(st.floats(0.2e-12, 0.99e-12), st.floats(0.005e-12, 0.5e-12), band)
def test_beta_increases_with_capacitance(c, dc, f):
    c2 = min(c + dc, 1e-12)
    b1 = dispersion_sample(GEOM, ControlState.uniform(c), CAL, f).beta
    b2 = dispersion_sample(GEOM, ControlState.uniform(c2), CAL, f).beta
    assert b2 >= b1


def test_frequency_scan_is_monotone():
    st_ = ControlState.uniform(0.447e-12)
    th = []
    for f in np.arange(28e9, 34.01e9, 0.5e9):
        d = dispersion_sample(GEOM, st_, CAL, f)
        th.append({h.n: h.theta_n for h in harmonic_angles(d.beta, d.alpha, f, 5e-3)}[-1])
    assert all(np.diff(th) > 0)


@given(caps12, bits12, band)
def test_mirror_symmetry_of_dispersion(caps, bits, f):
    s = ControlState.from_vectors(caps, bits)
    a = dispersion_sample(GEOM, s, CAL, f)
    b = dispersion_sample(GEOM, s.mirrored(), CAL, f)
    for x, y in zip(a.per_cell, b.per_cell):
        assert x.beta == pytest.approx(y.beta, rel=1e-12, abs=1e-9)
        assert x.alpha == pytest.approx(y.alpha, rel=1e-12, abs=1e-12)


@given(caps12, bits12, band)
def test_energy_budget_closes(caps, bits, f):
    s = ControlState.from_vectors(caps, bits)
    b, sm = power_budget(GEOM, s, CAL, f, SPECS)
    assert abs(b.total - 1) <= 1e-6
    assert min(b.p_reflected, b.p_through, b.p_radiated, b.p_dissipated) >= -1e-12
    assert abs(sm.s12 - sm.s21) <= 1e-9


LOSSLESS_GEOM = replace(GEOM, substrate=SubstrateSpec(3.66, 0.0, 1.55e-3))
LOSSLESS_SPECS = DeviceSpecs(VaractorSpec(q_at_f0=math.inf), DiodeSpec(r_on=0.0))
LOSSLESS_CAL = replace(CAL, g_leak=0.0)


@given(caps12, bits12, band)
def test_lossless_configuration_is_unitary(caps, bits, f):
    s = ControlState.from_vectors(caps, bits)
    sm = antenna_two_port(LOSSLESS_GEOM, s, LOSSLESS_CAL, f, LOSSLESS_SPECS)
    assert abs(abs(sm.s11) ** 2 + abs(sm.s21) ** 2 - 1) <= 1e-6


def test_uniform_unloaded_line_is_matched():
    geom = replace(LOSSLESS_GEOM, width_mid=GEOM.width_feed)
    cal = CalibrationConstants(c_gap=0.0, c_fringe_per_m=0.0, g_leak=0.0)
    for f in (28e9, 31e9, 34e9):
        sm = antenna_two_port(geom, ControlState.uniform(0.5e-12), cal, f, LOSSLESS_SPECS)
        assert abs(sm.s11) < 1e-9
        assert abs(sm.s21) == pytest.approx(1.0, abs=1e-9)


def test_feed_impedance_referencing():
    assert GEOM.line_params(GEOM.width_feed, 31e9).z0 == pytest.approx(50.0, rel=1e-12)
    raw = replace(GEOM, feed_impedance=None).line_params(GEOM.width_feed, 31e9).z0
    assert raw == pytest.approx(67.706, rel=1e-4)


def test_overloaded_cell_is_flagged_evanescent():
    # a 1 mm unloaded half-width strip is below its transverse cutoff at 28 GHz
    cal = replace(CAL, c_gap=0.0, c_fringe_per_m=0.0)
    cd = cell_dispersion(GEOM, ControlState.uniform(1e-12).cells[0], cal, 28e9, width=1e-3)
    assert cd.evanescent and cd.beta == 0.0 and cd.alpha_leak == 0.0 and cd.alpha > 0


def test_geometry_validation():
    with pytest.raises(ValueError):
        AntennaGeometry(n_cells=9)
    with pytest.raises(ValueError):
        AntennaGeometry(width_mid=1e-3)
    with pytest.raises(ValueError):
        AntennaGeometry(sub_segments=3)


def test_taper_is_linear_and_symmetric():
    g = GEOM
    assert g.width_at(0.0) == pytest.approx(g.width_feed)
    assert g.width_at(g.port_to_port / 2) == pytest.approx(g.width_mid)
    assert g.width_at(10e-3) == pytest.approx(g.width_at(g.port_to_port - 10e-3))
    assert g.cell_width(0) == pytest.approx(g.cell_width(g.n_cells - 1))


def test_state_size_must_match_geometry():
    with pytest.raises(ValueError):
        dispersion_sample(GEOM, ControlState.uniform(0.5e-12, n_cells=5), CAL, 31e9)
