"""Aperture synthesis, discrete radiation sums and beam metrics.

Direction convention: x is the antenna axis (port 1 -> port 2), z broadside,
and

    r(theta, phi) = (sin(theta), cos(theta) sin(phi), cos(theta) cos(phi)).

With this choice a leaky-wave cone ``sin(theta) = const`` is a line of constant
theta, and phi sweeps around it; the upper hemisphere is
theta, phi in [-90, 90] deg, with d(Omega) = cos(theta) d(theta) d(phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .components import ControlState
from .dispersion import DEFAULT_HARMONICS, AntennaGeometry, DispersionSample, PowerBudget
from .twoport import C0

if TYPE_CHECKING:
    from .steering import CalibrationConstants


@dataclass(frozen=True)
class GridSpec:
    theta_step: float = 1.0
    phi_step: float = 1.0
    theta_span: float = 90.0
    phi_span: float = 90.0
    cut_step: float = 0.5

    def theta(self) -> np.ndarray:
        n = int(round(2 * self.theta_span / self.theta_step))
        return np.linspace(-self.theta_span, self.theta_span, n + 1)

    def phi(self) -> np.ndarray:
        n = int(round(2 * self.phi_span / self.phi_step))
        return np.linspace(-self.phi_span, self.phi_span, n + 1)


@dataclass(frozen=True)
class FarfieldOptions:
    sub_samples_per_cell: int = 8
    element_exponent: float = 1.0
    grid: GridSpec = GridSpec()


@dataclass(frozen=True)
class TransverseWeights:
    a_left: float
    a_right: float
    psi: float
    y_offset: float


@dataclass(frozen=True, eq=False)
class ApertureField:
    """Sampled complex source distribution.

    ``beta``/``alpha`` are the local phase and attenuation constants of the
    fundamental at each sample, ``weights`` its amplitude envelope and
    ``harmonics`` the space harmonics carried by ``e``.
    """

    x: np.ndarray
    y: np.ndarray
    e: np.ndarray
    sub_samples_per_cell: int
    beta: np.ndarray | None = None
    alpha: np.ndarray | None = None
    weights: np.ndarray | None = None
    harmonics: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        if not (len(self.x) == len(self.y) == len(self.e)):
            raise ValueError("x, y and e must have equal length")
        if not np.all(np.isfinite(self.e)):
            raise ValueError("aperture amplitudes must be finite")

    def __len__(self) -> int:
        return len(self.e)

    def _w(self) -> np.ndarray:
        return np.abs(self.e) if self.weights is None else self.weights

    @property
    def mean_beta(self) -> float:
        """Amplitude-weighted mean phase slope of the fundamental."""
        w = self._w()
        return float(np.sum(w * self.beta) / np.sum(w))

    @property
    def mean_alpha(self) -> float:
        w = self._w()
        return float(np.sum(w * self.alpha) / np.sum(w))


@dataclass(frozen=True, eq=False)
class PatternCut:
    angles: np.ndarray
    u: np.ndarray
    fixed: float


@dataclass(frozen=True, eq=False)
class RadiationPattern:
    theta: np.ndarray
    phi: np.ndarray
    u: np.ndarray
    f: float
    total_power: float
    theta_cut: PatternCut
    phi_cut: PatternCut

    def integral(self) -> float:
        return integrate(self.theta, self.phi, self.u)


@dataclass(frozen=True)
class PatternMetrics:
    theta_peak: float
    phi_peak: float
    u_max: float
    directivity_dbi: float
    realized_gain_dbi: float
    hpbw_theta: float
    hpbw_phi: float
    on_boundary: bool = False
    hpbw_truncated: bool = False


def _trapz_weights(x: np.ndarray) -> np.ndarray:
    w = np.zeros_like(x)
    dx = np.diff(x)
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


def integrate(theta_deg: np.ndarray, phi_deg: np.ndarray, u: np.ndarray) -> float:
    """Trapezoidal quadrature of u over the (theta, phi) grid in steradians."""
    th = np.radians(theta_deg)
    wt = _trapz_weights(th) * np.cos(th)
    wp = _trapz_weights(np.radians(phi_deg))
    return float(wt @ u @ wp)


def transverse_weights(
    state: ControlState, cal: CalibrationConstants
) -> TransverseWeights:
    n = state.n_cells
    nl, nr = state.n_left, state.n_right
    return TransverseWeights(
        a_left=1 - cal.sigma * nl / n,
        a_right=1 - cal.sigma * nr / n,
        psi=cal.psi0 * (nl - nr) / n,
        y_offset=cal.y_offset,
    )


def radiating_harmonics(
    beta_bar: float, f: float, d_period: float, window: tuple[int, ...] = DEFAULT_HARMONICS
) -> tuple[int, ...]:
    """Space harmonics that radiate at mean phase slope ``beta_bar``.

    If none is fast, the one closest to the visible region is returned so the
    pattern still has a (flagged) endfire-leaning beam.
    """
    k0 = 2 * math.pi * f / C0
    slopes = {n: (beta_bar + 2 * math.pi * n / d_period) / k0 for n in window}
    fast = tuple(n for n, s in slopes.items() if abs(s) <= 1)
    if fast:
        return fast
    return (min(slopes, key=lambda n: abs(slopes[n])),)


def build_aperture(
    geom: AntennaGeometry,
    state: ControlState,
    cal: CalibrationConstants,
    disp: DispersionSample,
    sub_samples_per_cell: int = 8,
    window: tuple[int, ...] = DEFAULT_HARMONICS,
) -> ApertureField:
    """Two source lines at y = -/+ y_offset carrying the travelling field.

    Amplitude and phase accumulate continuously through the cells. The loaded
    line is slow, so only its space harmonics ``beta + 2 pi n / d`` can
    radiate; each line carries the fast ones, weighted equally. Bound
    harmonics are left out because a finite sum would radiate them from the
    aperture ends.
    """
    if len(disp.per_cell) != geom.n_cells:
        raise ValueError("dispersion must be computed for every cell")
    s = sub_samples_per_cell
    if s < 4:
        raise ValueError("need at least 4 sub-samples per cell")
    d = geom.cell_period
    xi = (np.arange(s) + 0.5) * d / s
    beta = np.array([c.beta for c in disp.per_cell])
    alpha = np.array([c.alpha for c in disp.per_cell])
    phase0 = np.concatenate([[0.0], np.cumsum(beta * d)[:-1]])
    atten0 = np.concatenate([[0.0], np.cumsum(alpha * d)[:-1]])

    local = (np.arange(geom.n_cells)[:, None] * d + xi[None, :]).ravel()
    x = geom.first_cell_x + local
    phase = (phase0[:, None] + beta[:, None] * xi[None, :]).ravel()
    atten = (atten0[:, None] + alpha[:, None] * xi[None, :]).ravel()
    amp = np.exp(-atten)
    b_loc = np.repeat(beta, s)
    a_loc = np.repeat(alpha, s)
    beta_bar = float(np.sum(amp * b_loc) / np.sum(amp))
    harmonics = radiating_harmonics(beta_bar, disp.f, d, window)
    shift = sum(np.exp(-2j * np.pi * n * local / d) for n in harmonics)
    base = amp * np.exp(-1j * phase) * shift

    tw = transverse_weights(state, cal)
    e = np.concatenate(
        [
            tw.a_left * np.exp(0.5j * tw.psi) * base,
            tw.a_right * np.exp(-0.5j * tw.psi) * base,
        ]
    )
    return ApertureField(
        x=np.concatenate([x, x]),
        y=np.concatenate([np.full_like(x, -tw.y_offset), np.full_like(x, tw.y_offset)]),
        e=e,
        sub_samples_per_cell=s,
        beta=np.concatenate([b_loc, b_loc]),
        alpha=np.concatenate([a_loc, a_loc]),
        weights=np.concatenate([tw.a_left * amp, tw.a_right * amp]),
        harmonics=harmonics,
    )


def _lines(ap: ApertureField) -> list[tuple[float, np.ndarray, np.ndarray]]:
    ys, inverse = np.unique(ap.y, return_inverse=True)
    return [(float(y), ap.x[inverse == k], ap.e[inverse == k]) for k, y in enumerate(ys)]


def _field(lines, k0: float, th: np.ndarray, ph: np.ndarray, p: float) -> np.ndarray:
    """Intensity on the outer product grid th x ph (radians)."""
    st, ct = np.sin(th), np.cos(th)
    sp = np.sin(ph)
    af = np.zeros((len(th), len(ph)), dtype=complex)
    cache: dict[float, np.ndarray] = {}
    for y, x, e in lines:
        afx = np.exp(1j * k0 * np.outer(st, x)) @ e
        # lines at -y and +y share one phase matrix (conjugates)
        key = abs(y)
        if key not in cache:
            cache[key] = np.exp(1j * k0 * key * np.outer(ct, sp))
        t = cache[key] if y >= 0 else cache[key].conj()
        af += afx[:, None] * t
    u = np.abs(af) ** 2
    if p:
        # x-directed magnetic line over ground: |r x x_hat| = cos(theta)
        u = u * (ct**p)[:, None]
    return u


def compute_pattern(
    ap: ApertureField,
    f: float,
    grid: GridSpec | None = None,
    element_exponent: float = 1.0,
    radiated_power: float = 1.0,
) -> RadiationPattern:
    """Radiation intensity of the aperture, scaled to integrate to ``radiated_power``.

    The sum over samples is separated into one x-sum per source line, which
    depends on theta only, times the transverse phase of that line.
    """
    if len(ap) == 0:
        raise ValueError("empty aperture")
    grid = grid or GridSpec()
    k0 = 2 * math.pi * f / C0
    lines = _lines(ap)
    th_deg, ph_deg = grid.theta(), grid.phi()
    p = element_exponent
    u = _field(lines, k0, np.radians(th_deg), np.radians(ph_deg), p)
    total = integrate(th_deg, ph_deg, u)
    if total <= 0:
        raise ValueError("aperture radiates no power on this grid")
    scale = radiated_power / total
    u = u * scale

    i, j = np.unravel_index(np.argmax(u), u.shape)
    phi0 = _refine(ph_deg, u[i, :], j)[0]
    th_fine = np.arange(-grid.theta_span, grid.theta_span + 1e-9, grid.cut_step)
    u_th = _field(lines, k0, np.radians(th_fine), np.radians([phi0]), p)[:, 0] * scale
    theta0 = _refine(th_fine, u_th, int(np.argmax(u_th)))[0]
    ph_fine = np.arange(-grid.phi_span, grid.phi_span + 1e-9, grid.cut_step)
    u_ph = _field(lines, k0, np.radians([theta0]), np.radians(ph_fine), p)[0, :] * scale
    return RadiationPattern(
        theta=th_deg,
        phi=ph_deg,
        u=u,
        f=f,
        total_power=radiated_power,
        theta_cut=PatternCut(th_fine, u_th, phi0),
        phi_cut=PatternCut(ph_fine, u_ph, theta0),
    )


def _refine(x: np.ndarray, y: np.ndarray, i: int) -> tuple[float, float]:
    """Parabolic peak refinement on log intensity around sample ``i``."""
    if i == 0 or i == len(x) - 1 or np.any(y[i - 1 : i + 2] <= 0):
        return float(x[i]), float(y[i])
    l0, l1, l2 = np.log(y[i - 1 : i + 2])
    den = l0 - 2 * l1 + l2
    if den >= 0:
        return float(x[i]), float(y[i])
    delta = 0.5 * (l0 - l2) / den
    h = x[i + 1] - x[i]
    peak = l1 - 0.25 * (l0 - l2) * delta
    return float(x[i] + delta * h), float(math.exp(peak))


def _hpbw(cut: PatternCut, peak: float, u_max: float) -> tuple[float, bool]:
    x, u = cut.angles, cut.u
    half = u_max / 2
    i = int(np.argmin(np.abs(x - peak)))
    truncated = False
    lo = x[0]
    for k in range(i, 0, -1):
        if u[k - 1] < half <= u[k]:
            lo = x[k - 1] + (half - u[k - 1]) / (u[k] - u[k - 1]) * (x[k] - x[k - 1])
            break
    else:
        truncated = True
    hi = x[-1]
    for k in range(i, len(x) - 1):
        if u[k + 1] < half <= u[k]:
            hi = x[k] + (u[k] - half) / (u[k] - u[k + 1]) * (x[k + 1] - x[k])
            break
    else:
        truncated = True
    return float(hi - lo), truncated


def pattern_metrics(p: RadiationPattern, budget: PowerBudget | None = None) -> PatternMetrics:
    """Peak direction, directivity, realized gain and half-power beamwidths.

    Realized gain is directivity times the radiated fraction of the incident
    power, so mismatch, dissipation and power reaching port 2 all count as
    loss. Without a budget the realized gain equals the directivity.
    """
    th_cut, ph_cut = p.theta_cut, p.phi_cut
    it = int(np.argmax(th_cut.u))
    theta_pk, u_th = _refine(th_cut.angles, th_cut.u, it)
    ip = int(np.argmax(ph_cut.u))
    phi_pk, u_ph = _refine(ph_cut.angles, ph_cut.u, ip)
    u_max = max(u_th, u_ph, float(p.u.max()))
    d = 4 * math.pi * u_max / p.integral()
    eta = 1.0 if budget is None else budget.p_radiated
    g = d * eta
    on_boundary = it in (0, len(th_cut.angles) - 1) or ip in (0, len(ph_cut.angles) - 1)
    hp_t, tr_t = _hpbw(th_cut, theta_pk, u_max)
    hp_p, tr_p = _hpbw(ph_cut, phi_pk, u_max)
    return PatternMetrics(
        theta_peak=theta_pk,
        phi_peak=phi_pk,
        u_max=u_max,
        directivity_dbi=10 * math.log10(d),
        realized_gain_dbi=10 * math.log10(g) if g > 0 else -math.inf,
        hpbw_theta=hp_t,
        hpbw_phi=hp_p,
        on_boundary=on_boundary,
        hpbw_truncated=tr_t or tr_p,
    )
