import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hwmlwa.twoport import (
    C0,
    DegenerateNetworkError,
    SubstrateSpec,
    TwoPortABCD,
    abcd_to_s,
    bloch_gamma,
    bloch_impedance,
    cascade,
    cascade_all,
    line_abcd,
    microstrip_params,
    series_abcd,
    shunt_abcd,
)

from oracles import chebyshev_power, hj_eps_eff_mp

SUB = SubstrateSpec(eps_r=3.66, tan_delta=0.0037, height=1.55e-3)


def test_quarter_wave_line_abcd():
    net = line_abcd(50.0, 1j * math.pi / 2, 1.0)
    assert abs(net.a) < 1e-15 and abs(net.d) < 1e-15
    assert net.b == pytest.approx(50j, abs=1e-12)
    assert net.c == pytest.approx(1j / 50, abs=1e-15)


def test_matched_shunt_admittance():
    s = abcd_to_s(shunt_abcd(1 / 50), 50.0)
    assert s.s11 == pytest.approx(-1 / 3, abs=1e-15)
    assert s.s21 == pytest.approx(2 / 3, abs=1e-15)


def test_series_reactance():
    s = abcd_to_s(series_abcd(50j), 50.0)
    assert s.s11 == pytest.approx(1j / (2 + 1j), abs=1e-15)


def test_matched_through_line_has_no_reflection():
    s = abcd_to_s(line_abcd(50.0, 0.3 + 2j, 0.01), 50.0)
    assert abs(s.s11) < 1e-12 and abs(s.s22) < 1e-12


def test_degenerate_network_raises():
    with pytest.raises(DegenerateNetworkError):
        abcd_to_s(TwoPortABCD(1, -100, 0, 1), 50.0)


@pytest.mark.parametrize("width", [0.5e-3, 1.0e-3, 2.0e-3, 2.5e-3, 5.0e-3])
def test_static_eps_eff_matches_high_precision_oracle(width):
    lp = microstrip_params(width, SUB, 31e9)
    assert lp.eps_eff_static == pytest.approx(hj_eps_eff_mp(width, SUB.height, SUB.eps_r), rel=1e-12)


def test_dispersion_raises_eps_eff_within_bounds():
    lo = microstrip_params(2e-3, SUB, 1e9)
    hi = microstrip_params(2e-3, SUB, 34e9)
    assert lo.eps_eff_static < hi.eps_eff < SUB.eps_r


def test_air_line_is_lossless_tem():
    lp = microstrip_params(2e-3, SubstrateSpec(1.0, 0.0, 1e-3), 30e9)
    assert lp.eps_eff == 1.0 and lp.alpha_d == 0.0


@pytest.mark.parametrize("bad", [dict(width=0.0), dict(f=-1.0)])
def test_microstrip_rejects_nonpositive_inputs(bad):
    args = dict(width=2e-3, f=30e9) | bad
    with pytest.raises(ValueError):
        microstrip_params(args["width"], SUB, args["f"])


def _lossy_cell(z0, gamma, length, g):
    half = line_abcd(z0, gamma, length / 2)
    return cascade(cascade(half, shunt_abcd(g)), half)


@pytest.mark.parametrize("n", [1, 2, 6, 13])
def test_n_cell_cascade_matches_chebyshev_formula(n):
    cell = _lossy_cell(47.0, 0.8 + 1300j, 5e-3, 0.004 + 0.01j)
    chain = cascade_all([cell] * n).as_tuple()
    ref = chebyshev_power(cell.as_tuple(), n)
    for x, y in zip(chain, ref):
        assert abs(x - y) <= 1e-9 * max(1.0, abs(y))


@pytest.mark.parametrize("n", [1, 3, 6])
def test_n_cell_cascade_equals_bloch_line(n):
    cell = _lossy_cell(47.0, 0.8 + 1300j, 5e-3, 0.004 + 0.01j)
    gamma = bloch_gamma(cell, 5e-3)
    zb = bloch_impedance(cell)
    equiv = line_abcd(zb, gamma, n * 5e-3).as_tuple()
    chain = cascade_all([cell] * n).as_tuple()
    for x, y in zip(chain, equiv):
        assert abs(x - y) <= 1e-9 * max(1.0, abs(y))


def test_bloch_of_plain_line_is_line_constant():
    gamma = 0.2 + 900j
    g = bloch_gamma(line_abcd(50.0, gamma, 5e-3), 5e-3)
    # Re(gamma) >= 0 fixes the branch; beta*d folds into (-pi, pi]
    bd = (gamma.imag * 5e-3 + math.pi) % (2 * math.pi) - math.pi
    assert g.real == pytest.approx(gamma.real, rel=1e-9)
    assert g.imag * 5e-3 == pytest.approx(bd, rel=1e-9)


def test_bloch_rejects_nonreciprocal_cell():
    with pytest.raises(ValueError):
        bloch_gamma(TwoPortABCD(2, 0, 0, 2), 1e-3)


elements = st.one_of(
    st.builds(
        lambda z, a, b, l: line_abcd(z, complex(a, b), l),
        st.floats(5, 200),
        st.floats(0, 50),
        st.floats(0, 3000),
        st.floats(0, 0.02),
    ),
    st.builds(lambda g, b: shunt_abcd(complex(g, b)), st.floats(0, 0.1), st.floats(-0.1, 0.1)),
    st.builds(lambda r, x: series_abcd(complex(r, x)), st.floats(0, 100), st.floats(-200, 200)),
)


@given(st.lists(elements, min_size=1, max_size=12))
def test_cascade_is_reciprocal_and_passive(nets):
    s = abcd_to_s(cascade_all(nets), 50.0)
    assert abs(s.s12 - s.s21) <= 1e-9 * max(1.0, abs(s.s21))
    assert abs(s.s11) ** 2 + abs(s.s21) ** 2 <= 1 + 1e-9


lossless = st.one_of(
    st.builds(lambda z, b, l: line_abcd(z, 1j * b, l), st.floats(5, 200), st.floats(0, 3000), st.floats(0, 0.02)),
    st.builds(lambda b: shunt_abcd(1j * b), st.floats(-0.1, 0.1)),
    st.builds(lambda x: series_abcd(1j * x), st.floats(-200, 200)),
)


@given(st.lists(lossless, min_size=1, max_size=12))
def test_lossless_cascade_conserves_power(nets):
    s = abcd_to_s(cascade_all(nets), 50.0)
    assert abs(abs(s.s11) ** 2 + abs(s.s21) ** 2 - 1) <= 1e-6


@given(st.floats(1e9, 60e9), st.floats(0.2e-3, 6e-3))
def test_eps_eff_bounded(f, w):
    lp = microstrip_params(w, SUB, f)
    assert 1 < lp.eps_eff_static <= lp.eps_eff < SUB.eps_r
    assert lp.z0 > 0 and lp.alpha_d >= 0


def test_free_space_constant():
    assert C0 == 299_792_458.0
    assert cmath.isclose(line_abcd(50, 0, 1).a, 1)
