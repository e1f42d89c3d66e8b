import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hwmlwa.components import (
    ControlState,
    DiodeSpec,
    VaractorSpec,
    diode_branch,
    q_interp,
    series_resistance,
    varactor_cv,
    varactor_impedance,
)

VS = VaractorSpec()


def test_series_resistance_at_q20():
    assert series_resistance(0.5e-12, VS, 20.0) == pytest.approx(0.5134, abs=5e-5)


def test_infinite_q_is_lossless():
    assert series_resistance(0.5e-12, VS, math.inf) == 0.0


def test_varactor_impedance_reactance():
    z = varactor_impedance(0.5e-12, VS, 31e9, q=20.0)
    assert z.imag == pytest.approx(-1 / (2 * math.pi * 31e9 * 0.5e-12))
    with pytest.raises(ValueError):
        varactor_impedance(2e-12, VS, 31e9)


def test_diode_on_branch():
    z = diode_branch(True, DiodeSpec(), 31e9)
    assert z.real == pytest.approx(1.0)
    assert z.imag == pytest.approx(5.843, abs=5e-4)


def test_diode_off_branch_is_capacitive():
    assert diode_branch(False, DiodeSpec(), 31e9).imag < 0
    assert math.isinf(abs(diode_branch(False, DiodeSpec(c_off=0.0), 31e9)))


def test_cv_law_hits_half_picofarad():
    assert varactor_cv(2.1, VS) == pytest.approx(0.5e-12, rel=1e-12)
    assert varactor_cv(0.0, VS) == VS.c_max
    with pytest.raises(ValueError):
        varactor_cv(-1.0, VS)


def test_q_table_interpolation_and_band():
    spec = VaractorSpec(q_table=((28e9, 10.0), (34e9, 20.0)))
    assert q_interp(31e9, spec) == pytest.approx(15.0)
    with pytest.raises(ValueError):
        q_interp(40e9, spec)


def test_spec_validation():
    with pytest.raises(ValueError):
        VaractorSpec(c_min=1e-12, c_max=0.5e-12)
    with pytest.raises(ValueError):
        DiodeSpec(r_on=-1)


def test_canonical_states_fill_from_port_one():
    s = ControlState.from_asymmetry(0.5e-12, 2)
    assert s.diodes[:6] == (True, True, False, False, False, False)
    assert s.n_right == 0 and s.asymmetry == 2
    assert ControlState.from_asymmetry(0.5e-12, -3).asymmetry == -3
    with pytest.raises(ValueError):
        ControlState.from_asymmetry(0.5e-12, 7)


def test_control_numbering_left_then_right():
    caps = [k * 0.05e-12 + 0.2e-12 for k in range(12)]
    s = ControlState.from_vectors(caps, [False] * 12)
    assert s.cells[0].c_left == caps[0] and s.cells[0].c_right == caps[6]
    assert s.capacitances == tuple(caps)


caps12 = st.lists(st.floats(0.2e-12, 1e-12), min_size=12, max_size=12)
bits12 = st.lists(st.booleans(), min_size=12, max_size=12)


@given(caps12, bits12)
def test_hex_round_trip(caps, bits):
    s = ControlState.from_vectors(caps, bits)
    assert ControlState.from_hex(caps, s.diodes_hex) == s


@given(caps12, bits12)
def test_mirror_is_an_involution(caps, bits):
    s = ControlState.from_vectors(caps, bits)
    m = s.mirrored()
    assert m.mirrored() == s
    assert m.asymmetry == -s.asymmetry


def test_validate_range():
    s = ControlState.uniform(0.5e-12).with_capacitance(3, 1.5e-12)
    with pytest.raises(ValueError, match="capacitance 4"):
        s.validate(VS)
