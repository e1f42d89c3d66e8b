"""Two-port chain algebra and closed-form microstrip line parameters.

Microstrip model: Hammerstad & Jensen (1980) for the quasi-static effective
permittivity and characteristic impedance of a zero-thickness strip, with the
Kirschning & Jansen (1982) frequency-dispersion correction of the effective
permittivity. Z0 is kept at its static value.

All values are immutable; every function here is pure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

C0 = 299_792_458.0
MU0 = 4e-7 * math.pi
ETA0 = MU0 * C0


class DegenerateNetworkError(ValueError):
    """Raised when a chain matrix has no scattering representation."""


@dataclass(frozen=True)
class SubstrateSpec:
    eps_r: float
    tan_delta: float
    height: float

    def __post_init__(self) -> None:
        if self.eps_r < 1:
            raise ValueError(f"eps_r must be >= 1, got {self.eps_r}")
        if self.tan_delta < 0:
            raise ValueError(f"tan_delta must be >= 0, got {self.tan_delta}")
        if self.height <= 0:
            raise ValueError(f"height must be > 0, got {self.height}")


@dataclass(frozen=True)
class LineParams:
    """Quasi-TEM line parameters at one width and frequency.

    ``eps_eff`` includes the dispersion correction; ``eps_eff_static`` is the
    zero-frequency value.
    """

    eps_eff: float
    z0: float
    alpha_d: float
    eps_eff_static: float


@dataclass(frozen=True)
class TwoPortABCD:
    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def identity(cls) -> TwoPortABCD:
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: TwoPortABCD) -> TwoPortABCD:
        return cascade(self, other)

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class ScatterMatrix:
    s11: complex
    s12: complex
    s21: complex
    s22: complex
    z_ref: float = 50.0


def _hj_eps_eff(u: float, eps_r: float) -> float:
    a = (
        1
        + math.log((u**4 + (u / 52) ** 2) / (u**4 + 0.432)) / 49
        + math.log(1 + (u / 18.1) ** 3) / 18.7
    )
    b = 0.564 * ((eps_r - 0.9) / (eps_r + 3)) ** 0.053
    return (eps_r + 1) / 2 + (eps_r - 1) / 2 * (1 + 10 / u) ** (-a * b)


def _hj_z0_air(u: float) -> float:
    f_u = 6 + (2 * math.pi - 6) * math.exp(-((30.666 / u) ** 0.7528))
    return ETA0 / (2 * math.pi) * math.log(f_u / u + math.sqrt(1 + (2 / u) ** 2))


def _kj_dispersion(eps_static: float, u: float, eps_r: float, f: float, h: float) -> float:
    fn = f * 1e-9 * h * 1e3  # GHz * mm
    p1 = (
        0.27488
        + (0.6315 + 0.525 / (1 + 0.0157 * fn) ** 20) * u
        - 0.065683 * math.exp(-8.7513 * u)
    )
    p2 = 0.33622 * (1 - math.exp(-0.03442 * eps_r))
    p3 = 0.0363 * math.exp(-4.6 * u) * (1 - math.exp(-((fn / 38.7) ** 4.97)))
    p4 = 1 + 2.751 * (1 - math.exp(-((eps_r / 15.916) ** 8)))
    p = p1 * p2 * ((0.1844 + p3 * p4) * fn) ** 1.5763
    return eps_r - (eps_r - eps_static) / (1 + p)


def microstrip_params(width: float, substrate: SubstrateSpec, f: float) -> LineParams:
    """Effective permittivity, impedance and dielectric loss of a microstrip.

    Args:
        width: strip width in meters.
        substrate: dielectric description.
        f: frequency in hertz.

    Raises:
        ValueError: for non-positive width or frequency.
    """
    if width <= 0:
        raise ValueError(f"width must be > 0, got {width}")
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    eps_r = substrate.eps_r
    u = width / substrate.height
    eps_static = _hj_eps_eff(u, eps_r)
    z0 = _hj_z0_air(u) / math.sqrt(eps_static)
    if eps_r == 1.0:
        return LineParams(eps_eff=1.0, z0=z0, alpha_d=0.0, eps_eff_static=1.0)
    eps_f = _kj_dispersion(eps_static, u, eps_r, f, substrate.height)
    q_fill = eps_r * (eps_f - 1) / (eps_f * (eps_r - 1))
    alpha_d = math.pi * f * math.sqrt(eps_f) / C0 * substrate.tan_delta * q_fill
    return LineParams(eps_eff=eps_f, z0=z0, alpha_d=alpha_d, eps_eff_static=eps_static)


def tline_abcd(params: LineParams, gamma: complex, length: float) -> TwoPortABCD:
    """Chain matrix of a uniform line of impedance ``params.z0``."""
    return line_abcd(params.z0, gamma, length)


def line_abcd(z0: complex, gamma: complex, length: float) -> TwoPortABCD:
    if length < 0:
        raise ValueError(f"length must be >= 0, got {length}")
    gl = gamma * length
    ch = cmath.cosh(gl)
    sh = cmath.sinh(gl)
    return TwoPortABCD(ch, z0 * sh, sh / z0, ch)


def shunt_abcd(y: complex) -> TwoPortABCD:
    return TwoPortABCD(1 + 0j, 0j, complex(y), 1 + 0j)


def series_abcd(z: complex) -> TwoPortABCD:
    return TwoPortABCD(1 + 0j, complex(z), 0j, 1 + 0j)


def cascade(left: TwoPortABCD, right: TwoPortABCD) -> TwoPortABCD:
    """Chain-matrix product; port 1 of ``left`` becomes the composite port 1."""
    return TwoPortABCD(
        left.a * right.a + left.b * right.c,
        left.a * right.b + left.b * right.d,
        left.c * right.a + left.d * right.c,
        left.c * right.b + left.d * right.d,
    )


def cascade_all(nets) -> TwoPortABCD:
    out = TwoPortABCD.identity()
    for net in nets:
        out = cascade(out, net)
    return out


def abcd_to_s(net: TwoPortABCD, z_ref: float = 50.0) -> ScatterMatrix:
    if z_ref <= 0:
        raise ValueError(f"z_ref must be > 0, got {z_ref}")
    a, b, c, d = net.as_tuple()
    z = z_ref
    den = a * z + b + c * z * z + d * z
    if den == 0:
        raise DegenerateNetworkError("a*z + b + c*z^2 + d*z vanishes")
    s11 = (a * z + b - c * z * z - d * z) / den
    s12 = 2 * (a * d - b * c) * z / den
    s21 = 2 * z / den
    s22 = (-a * z + b - c * z * z + d * z) / den
    return ScatterMatrix(s11, s12, s21, s22, z_ref)


def bloch_gamma(cell: TwoPortABCD, d_period: float, det_tol: float = 1e-6) -> complex:
    """Per-length Bloch propagation constant of an infinite chain of ``cell``.

    Solves cosh(gamma*d) = (a + d)/2 on the principal branch, with the sign
    fixed so that Re(gamma) >= 0 and, on the imaginary axis, Im(gamma) >= 0.
    """
    if d_period <= 0:
        raise ValueError(f"d_period must be > 0, got {d_period}")
    if abs(cell.det - 1) > det_tol:
        raise ValueError(f"cell is not reciprocal: det = {cell.det}")
    gd = cmath.acosh((cell.a + cell.d) / 2)
    if gd.real < 0 or (gd.real == 0 and gd.imag < 0):
        gd = -gd
    return gd / d_period


def bloch_impedance(cell: TwoPortABCD) -> complex:
    """Bloch impedance of a symmetric cell (a == d).

    Taken as b / sinh(gamma*d) on the same branch as :func:`bloch_gamma`, so
    that an N-cell chain equals a line of this impedance and N*d length.
    """
    sh = cmath.sinh(bloch_gamma(cell, 1.0))
    if sh == 0:
        raise DegenerateNetworkError("Bloch impedance undefined at a band edge")
    return cell.b / sh
