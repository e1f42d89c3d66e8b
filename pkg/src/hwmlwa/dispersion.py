"""Leaky-mode dispersion of the loaded half-width line and the port-level cascade.

Each unit cell is treated as a half-width microstrip with a via wall at one
edge and a capacitively loaded open edge. The transverse wavenumber solves

    g(tau) = chi,  g(tau) = sqrt(tau) * cot(sqrt(tau) * w)

(continued analytically through tau = 0), with ``chi = w^2 mu0 h C'`` the edge
loading. The longitudinal phase constant follows from
``beta^2 = eps_eff * k0^2 - tau`` with the quasi-static effective permittivity.

For the port-level network, the reactive loading is carried by the loaded-line
phase constant and a modal impedance ``Z0 * beta_unloaded / beta``. Shunts
carry only conductances: leakage spread over the sub-segments, component
losses lumped at the loading point.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from scipy.optimize import brentq

from .components import (
    CellLoading,
    ControlState,
    DeviceSpecs,
    VaractorSpec,
    diode_branch,
    q_interp,
    series_resistance,
)
from .twoport import (
    C0,
    MU0,
    LineParams,
    ScatterMatrix,
    SubstrateSpec,
    TwoPortABCD,
    abcd_to_s,
    cascade,
    line_abcd,
    microstrip_params,
    shunt_abcd,
)

if TYPE_CHECKING:
    from .steering import CalibrationConstants

DEFAULT_HARMONICS = (-2, -1, 0, 1)


# pure function of hashable args; the cascade asks for the same widths repeatedly
_microstrip = functools.lru_cache(maxsize=65536)(microstrip_params)


@dataclass(frozen=True)
class AntennaGeometry:
    length: float = 39e-3
    port_to_port: float = 45e-3
    width_feed: float = 2.0e-3
    width_mid: float = 2.5e-3
    cell_period: float = 5e-3
    n_cells: int = 6
    substrate: SubstrateSpec = field(
        default_factory=lambda: SubstrateSpec(eps_r=3.66, tan_delta=0.0037, height=1.55e-3)
    )
    sub_segments: int = 8
    # impedance the feed-width line presents at the ports; None keeps raw Z0
    feed_impedance: float | None = 50.0

    def __post_init__(self) -> None:
        if self.n_cells * self.cell_period > self.length * (1 + 1e-12):
            raise ValueError("n_cells * cell_period exceeds the radiating length")
        if self.length > self.port_to_port * (1 + 1e-12):
            raise ValueError("radiating length exceeds the port-to-port length")
        if not self.width_mid >= self.width_feed > 0:
            raise ValueError("need width_mid >= width_feed > 0")
        if self.sub_segments < 2 or self.sub_segments % 2:
            raise ValueError("sub_segments must be an even number >= 2")
        if self.feed_impedance is not None and self.feed_impedance <= 0:
            raise ValueError("feed_impedance must be > 0")

    @property
    def first_cell_x(self) -> float:
        """Distance from port 1 to the start of cell 1 (cells centered in L)."""
        lead = (self.port_to_port - self.length) / 2
        return lead + (self.length - self.n_cells * self.cell_period) / 2

    def cell_start(self, i: int) -> float:
        """Start of the 0-based cell ``i`` measured from port 1."""
        return self.first_cell_x + i * self.cell_period

    def width_at(self, x: float) -> float:
        """Linear taper from the feed width at the ports to the mid width."""
        half = self.port_to_port / 2
        t = 1 - abs(x - half) / half
        return self.width_feed + (self.width_mid - self.width_feed) * min(max(t, 0.0), 1.0)

    def line_params(self, width: float, f: float) -> LineParams:
        """Line parameters at ``width``, with Z0 referenced to the feed impedance.

        All impedances are scaled by one factor so that the feed width maps
        to ``feed_impedance``; permittivity and loss are untouched.
        """
        lp = _microstrip(width, self.substrate, f)
        if self.feed_impedance is None:
            return lp
        z_feed = _microstrip(self.width_feed, self.substrate, f).z0
        return replace(lp, z0=lp.z0 * self.feed_impedance / z_feed)

    def cell_width(self, i: int) -> float:
        x0 = self.cell_start(i)
        n = self.sub_segments
        h = self.cell_period / n
        return sum(self.width_at(x0 + (j + 0.5) * h) for j in range(n)) / n


@dataclass(frozen=True)
class CellDispersion:
    """Propagation data of one loaded cell.

    ``p`` is the loss-free modal propagation constant ``sqrt(tau - eps k0^2)``
    (``j*beta`` when propagating); ``z_mode`` the matching modal impedance.
    """

    beta: float
    alpha: float
    tau: float
    chi: float
    eps_eff: float
    width: float
    alpha_leak: float
    alpha_d: float
    alpha_comp: float
    evanescent: bool
    p: complex
    z_mode: complex
    g_leak_cell: float
    g_comp_cell: float


@dataclass(frozen=True)
class DispersionSample:
    f: float
    k0: float
    per_cell: tuple[CellDispersion, ...]

    @property
    def beta(self) -> float:
        return sum(c.beta for c in self.per_cell) / len(self.per_cell)

    @property
    def alpha(self) -> float:
        return sum(c.alpha for c in self.per_cell) / len(self.per_cell)

    @property
    def k_t_sq(self) -> float:
        return sum(c.tau for c in self.per_cell) / len(self.per_cell)


@dataclass(frozen=True)
class HarmonicAngle:
    n: int
    theta_n: float
    radiating: bool


@dataclass(frozen=True)
class PowerBudget:
    p_reflected: float
    p_through: float
    p_radiated: float
    p_dissipated: float

    @property
    def total(self) -> float:
        return self.p_reflected + self.p_through + self.p_radiated + self.p_dissipated

    @property
    def radiation_efficiency(self) -> float:
        den = self.p_radiated + self.p_dissipated
        return self.p_radiated / den if den > 0 else 1.0


def _g(tau: float, w: float) -> float:
    x = tau * w * w
    if abs(x) < 1e-8:
        return 1 / w - tau * w / 3
    if tau > 0:
        s = math.sqrt(tau)
        return s / math.tan(s * w)
    q = math.sqrt(-tau)
    return q / math.tanh(q * w)


def transverse_root(width: float, chi: float) -> float:
    """Unique tau < (pi/w)^2 with g(tau) = chi (g is strictly decreasing there)."""
    if width <= 0:
        raise ValueError(f"width must be > 0, got {width}")
    if chi < 0:
        raise ValueError(f"edge loading chi must be >= 0, got {chi}")
    hi = (math.pi / (2 * width)) ** 2
    # g(hi) is zero only up to rounding; smaller loadings resolve to hi
    if chi == 0 or _g(hi, width) >= chi:
        return hi
    lo = -(chi * chi) - 1.0
    return brentq(lambda t: _g(t, width) - chi, lo, hi, xtol=1e-12, rtol=1e-15, maxiter=500)


def _series(c1: float, c2: float) -> float:
    if c1 == 0 or c2 == 0:
        return 0.0
    if math.isinf(c1):
        return c2
    if math.isinf(c2):
        return c1
    return c1 * c2 / (c1 + c2)


def edge_loading(
    cell: CellLoading, cal: CalibrationConstants, f: float, geom: AntennaGeometry
) -> tuple[float, float, float]:
    """Edge loading (chi_left, chi_right, chi_total) of one cell in 1/m.

    Per side ``C' = series(C_gap, C_var)/d + C'_fringe``; the total sums both
    sides and is floored at zero.
    """
    k = (2 * math.pi * f) ** 2 * MU0 * geom.substrate.height
    d = geom.cell_period
    chi_l = k * (_series(cal.c_gap, cell.c_left) / d + cal.c_fringe_per_m)
    chi_r = k * (_series(cal.c_gap, cell.c_right) / d + cal.c_fringe_per_m)
    return chi_l, chi_r, max(chi_l + chi_r, 0.0)


def edge_field_ratio(tau: float, width: float) -> float:
    """Open-edge field energy relative to the cross-section, 1 when unloaded.

    Ratio E(w)^2 * w / (2 * integral of E^2 over the width) for the transverse
    profile sin, linear, or sinh.
    """
    w = width
    x = tau * w * w
    if abs(x) < 1e-8:
        return 1.5
    if tau > 0:
        s = math.sqrt(tau)
        integral = w / 2 - math.sin(2 * s * w) / (4 * s)
        return math.sin(s * w) ** 2 * w / (2 * integral)
    q = math.sqrt(-tau)
    # ratio of sinh^2(qw) to its integral, written to avoid overflow
    e = math.exp(-2 * q * w)
    num = (1 - e) ** 2 / 4
    integral = (1 - e * e) / (8 * q) - w * e / 2
    return num * w / (2 * integral)


def effective_q(spec: VaractorSpec, f: float) -> float:
    if spec.q_table is None:
        return spec.q_at_f0
    return q_interp(f, spec)


def _branch_conductance(z_elem: complex, c_gap: float, w: float) -> float:
    """Conductance of ``z_elem`` seen through the coupling gap capacitance."""
    if c_gap == 0 or math.isinf(abs(z_elem)):
        return 0.0
    z = z_elem if math.isinf(c_gap) else z_elem + 1 / (1j * w * c_gap)
    if z == 0:
        raise ValueError("ideal short through a transparent gap: unbounded conductance")
    return (1 / z).real


def cell_dispersion(
    geom: AntennaGeometry,
    cell: CellLoading,
    cal: CalibrationConstants,
    f: float,
    specs: DeviceSpecs | None = None,
    width: float | None = None,
) -> CellDispersion:
    """Phase and attenuation constants of one loaded cell.

    Evanescent cells (``eps k0^2 < tau``) are returned with ``beta = 0`` and
    the reactive decay added to ``alpha``; they are flagged, not rejected.
    """
    specs = specs or DeviceSpecs()
    i = cell.cell_index - 1
    w_cell = geom.cell_width(i) if width is None else width
    k0 = 2 * math.pi * f / C0
    omega = 2 * math.pi * f
    line = geom.line_params(w_cell, f)
    eps = line.eps_eff_static
    _, _, chi = edge_loading(cell, cal, f, geom)
    tau = transverse_root(w_cell, chi)
    p = cmath.sqrt(tau - eps * k0 * k0)
    if p.real == 0 and p.imag < 0:
        p = -p
    evanescent = p.real > 0
    beta = p.imag if not evanescent else 0.0
    beta_u_sq = eps * k0 * k0 - (math.pi / (2 * w_cell)) ** 2
    beta_ref = math.sqrt(beta_u_sq) if beta_u_sq > 0 else math.sqrt(eps) * k0
    z_mode = 1j * line.z0 * beta_ref / p

    vspec = specs.varactor
    q = effective_q(vspec, f)
    g_comp = 0.0
    for c_var, on in ((cell.c_left, cell.diode_left), (cell.c_right, cell.diode_right)):
        z_var = series_resistance(c_var, vspec, q) + 1 / (1j * omega * c_var)
        g_comp += _branch_conductance(z_var, cal.c_gap, omega)
        g_comp += _branch_conductance(diode_branch(on, specs.diode, f), cal.c_gap, omega)

    d = geom.cell_period
    zr = z_mode.real if not evanescent else abs(z_mode)
    # G'_leak |E_edge|^2 / (2 P), with power flow P proportional to beta
    alpha_leak = 0.0 if evanescent else cal.g_leak * k0 * edge_field_ratio(tau, w_cell) * k0 / beta
    alpha_comp = g_comp / d * zr / 2
    g_leak_cell = 2 * alpha_leak * d / zr
    alpha = alpha_leak + line.alpha_d + alpha_comp + (p.real if evanescent else 0.0)
    return CellDispersion(
        beta=beta,
        alpha=alpha,
        tau=tau,
        chi=chi,
        eps_eff=eps,
        width=w_cell,
        alpha_leak=alpha_leak,
        alpha_d=line.alpha_d,
        alpha_comp=alpha_comp,
        evanescent=evanescent,
        p=p,
        z_mode=z_mode,
        g_leak_cell=g_leak_cell,
        g_comp_cell=g_comp,
    )


def dispersion_sample(
    geom: AntennaGeometry,
    state: ControlState,
    cal: CalibrationConstants,
    f: float,
    specs: DeviceSpecs | None = None,
) -> DispersionSample:
    if state.n_cells != geom.n_cells:
        raise ValueError(f"state has {state.n_cells} cells, geometry has {geom.n_cells}")
    cells = tuple(cell_dispersion(geom, c, cal, f, specs) for c in state.cells)
    return DispersionSample(f=f, k0=2 * math.pi * f / C0, per_cell=cells)


def harmonic_angles(
    beta: float,
    alpha: float,
    f: float,
    d_period: float,
    harmonics: tuple[int, ...] = DEFAULT_HARMONICS,
) -> list[HarmonicAngle]:
    """Floquet harmonic angles in degrees, positive toward port 2.

    ``alpha`` does not move the real beam direction in this model; it is
    accepted for symmetry with the complex propagation constant.
    """
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    k0 = 2 * math.pi * f / C0
    out = []
    for n in harmonics:
        s = (beta + 2 * math.pi * n / d_period) / k0
        radiating = abs(s) <= 1
        theta = math.degrees(math.asin(s)) if radiating else math.nan
        out.append(HarmonicAngle(n, theta, radiating))
    return out


# network elements: ("line", abcd) or ("shunt", g_leak, g_diss)
def _network_elements(
    geom: AntennaGeometry,
    disp: DispersionSample,
) -> list[tuple]:
    f = disp.f
    n_sub = geom.sub_segments
    h_seg = geom.cell_period / n_sub
    k0 = disp.k0
    elements: list[tuple] = []

    def lead(x0: float, x1: float) -> None:
        if x1 <= x0:
            return
        n = max(1, round((x1 - x0) / h_seg))
        dx = (x1 - x0) / n
        for j in range(n):
            lp = geom.line_params(geom.width_at(x0 + (j + 0.5) * dx), f)
            gamma = lp.alpha_d + 1j * math.sqrt(lp.eps_eff) * k0
            elements.append(("line", line_abcd(lp.z0, gamma, dx)))

    lead(0.0, geom.first_cell_x)
    for i, cd in enumerate(disp.per_cell):
        x0 = geom.cell_start(i)
        gamma = cd.alpha_d + cd.p
        ratio = cd.z_mode / geom.line_params(cd.width, f).z0
        g_leak_seg = cd.g_leak_cell / n_sub
        for j in range(n_sub):
            if j == n_sub // 2:
                elements.append(("shunt", 0.0, cd.g_comp_cell))
            z0 = geom.line_params(geom.width_at(x0 + (j + 0.5) * h_seg), f).z0
            line = line_abcd(z0 * ratio, gamma, h_seg / 2)
            elements.append(("line", line))
            elements.append(("shunt", g_leak_seg, 0.0))
            elements.append(("line", line))
    lead(geom.cell_start(geom.n_cells), geom.port_to_port)
    return elements


def _chain(elements: list[tuple]) -> TwoPortABCD:
    net = TwoPortABCD.identity()
    for el in elements:
        net = cascade(net, el[1] if el[0] == "line" else shunt_abcd(el[1] + el[2]))
    return net


def antenna_two_port(
    geom: AntennaGeometry,
    state: ControlState,
    cal: CalibrationConstants,
    f: float,
    specs: DeviceSpecs | None = None,
    z_ref: float = 50.0,
    disp: DispersionSample | None = None,
) -> ScatterMatrix:
    disp = disp or dispersion_sample(geom, state, cal, f, specs)
    return abcd_to_s(_chain(_network_elements(geom, disp)), z_ref)


def power_budget(
    geom: AntennaGeometry,
    state: ControlState,
    cal: CalibrationConstants,
    f: float,
    specs: DeviceSpecs | None = None,
    z_ref: float = 50.0,
    disp: DispersionSample | None = None,
) -> tuple[PowerBudget, ScatterMatrix]:
    """Fractions of the incident power reflected, transmitted, leaked and lost.

    Reflected and through fractions come from the scattering matrix; radiated
    and dissipated fractions from a node-voltage walk back from the matched
    port 2, so the four-way sum is an independent energy check.
    """
    disp = disp or dispersion_sample(geom, state, cal, f, specs)
    elements = _network_elements(geom, disp)
    s = abcd_to_s(_chain(elements), z_ref)

    v, i = complex(z_ref), 1 + 0j
    p_rad = p_diss = 0.0
    for el in reversed(elements):
        if el[0] == "shunt":
            vv = abs(v) ** 2 / 2
            p_rad += vv * el[1]
            p_diss += vv * el[2]
            i = i + (el[1] + el[2]) * v
        else:
            m = el[1]
            v_in = m.a * v + m.b * i
            i_in = m.c * v + m.d * i
            p_diss += ((v_in * i_in.conjugate()).real - (v * i.conjugate()).real) / 2
            v, i = v_in, i_in
    p_inc = abs(v + z_ref * i) ** 2 / (8 * z_ref)
    budget = PowerBudget(
        p_reflected=abs(s.s11) ** 2,
        p_through=abs(s.s21) ** 2,
        p_radiated=p_rad / p_inc,
        p_dissipated=p_diss / p_inc,
    )
    return budget, s
