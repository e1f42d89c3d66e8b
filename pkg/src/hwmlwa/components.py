"""Lumped models of the tuning elements and the 24-value control state."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class VaractorSpec:
    """Varactor with a series-resistance Q model and an abrupt-junction C-V law."""

    c_min: float = 0.2e-12
    c_max: float = 1.0e-12
    q_at_f0: float = 15.0
    f0_q: float = 31e9
    cv_c0: float = 1.0e-12
    cv_vj: float = 0.7
    cv_m: float = 0.5
    q_table: tuple[tuple[float, float], ...] | None = None
    q_band: tuple[float, float] = (28e9, 34e9)

    def __post_init__(self) -> None:
        if not 0 < self.c_min < self.c_max:
            raise ValueError(f"need 0 < c_min < c_max, got {self.c_min}, {self.c_max}")
        if self.q_at_f0 <= 0:
            raise ValueError(f"q_at_f0 must be > 0, got {self.q_at_f0}")

    def with_q(self, q: float) -> VaractorSpec:
        return replace(self, q_at_f0=q, q_table=None)


@dataclass(frozen=True)
class DiodeSpec:
    # placeholder values, not taken from a datasheet
    r_on: float = 1.0
    c_off: float = 25e-15
    l_via: float = 30e-12

    def __post_init__(self) -> None:
        if self.r_on < 0 or self.c_off < 0 or self.l_via < 0:
            raise ValueError("diode parameters must be nonnegative")


@dataclass(frozen=True)
class DeviceSpecs:
    varactor: VaractorSpec = field(default_factory=VaractorSpec)
    diode: DiodeSpec = field(default_factory=DiodeSpec)


@dataclass(frozen=True)
class CellLoading:
    cell_index: int
    c_left: float
    c_right: float
    diode_left: bool = False
    diode_right: bool = False


@dataclass(frozen=True)
class ControlState:
    """Twelve varactor capacitances and twelve diode bits.

    Control ``k`` (1-based) addresses the left side of cell ``k`` for
    ``k <= n_cells`` and the right side of cell ``k - n_cells`` otherwise.
    """

    cells: tuple[CellLoading, ...]

    @classmethod
    def uniform(
        cls,
        c: float,
        n_cells: int = 6,
        n_left: int = 0,
        n_right: int = 0,
    ) -> ControlState:
        """Uniform capacitance with ``n_left``/``n_right`` shorted patches.

        Shorted patches fill contiguously from the port-1 end.
        """
        return cls(
            tuple(
                CellLoading(i + 1, c, c, i < n_left, i < n_right)
                for i in range(n_cells)
            )
        )

    @classmethod
    def from_asymmetry(cls, c: float, index: int, n_cells: int = 6) -> ControlState:
        """Canonical state for asymmetry index ``N_L - N_R``."""
        if abs(index) > n_cells:
            raise ValueError(f"asymmetry index {index} outside +-{n_cells}")
        return cls.uniform(c, n_cells, max(index, 0), max(-index, 0))

    @classmethod
    def from_vectors(
        cls, caps: Sequence[float], diodes: Sequence[bool]
    ) -> ControlState:
        n = len(caps) // 2
        if len(caps) != 2 * n or len(diodes) != 2 * n:
            raise ValueError("need an even number of capacitances and matching diode bits")
        return cls(
            tuple(
                CellLoading(i + 1, caps[i], caps[n + i], bool(diodes[i]), bool(diodes[n + i]))
                for i in range(n)
            )
        )

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def capacitances(self) -> tuple[float, ...]:
        return tuple(c.c_left for c in self.cells) + tuple(c.c_right for c in self.cells)

    @property
    def diodes(self) -> tuple[bool, ...]:
        return tuple(c.diode_left for c in self.cells) + tuple(c.diode_right for c in self.cells)

    @property
    def n_left(self) -> int:
        return sum(c.diode_left for c in self.cells)

    @property
    def n_right(self) -> int:
        return sum(c.diode_right for c in self.cells)

    @property
    def asymmetry(self) -> int:
        return self.n_left - self.n_right

    @property
    def diodes_hex(self) -> str:
        """Diode bits as hex; bit k-1 holds control k."""
        value = sum(1 << k for k, on in enumerate(self.diodes) if on)
        return f"{value:0{(2 * self.n_cells + 3) // 4}x}"

    @classmethod
    def from_hex(cls, caps: Sequence[float], hex_bits: str) -> ControlState:
        value = int(hex_bits, 16)
        bits = [bool(value >> k & 1) for k in range(len(caps))]
        return cls.from_vectors(caps, bits)

    def mirrored(self) -> ControlState:
        """Swap left and right on every cell."""
        return ControlState(
            tuple(
                CellLoading(c.cell_index, c.c_right, c.c_left, c.diode_right, c.diode_left)
                for c in self.cells
            )
        )

    def with_capacitance(self, k: int, c: float) -> ControlState:
        caps = list(self.capacitances)
        caps[k] = c
        return ControlState.from_vectors(caps, self.diodes)

    def validate(self, spec: VaractorSpec, n_cells: int | None = None) -> None:
        if n_cells is not None and self.n_cells != n_cells:
            raise ValueError(f"state has {self.n_cells} cells, geometry has {n_cells}")
        for k, c in enumerate(self.capacitances, start=1):
            if not spec.c_min * (1 - 1e-9) <= c <= spec.c_max * (1 + 1e-9):
                raise ValueError(
                    f"capacitance {k} = {c:.4g} F outside [{spec.c_min:.4g}, {spec.c_max:.4g}]"
                )


def series_resistance(c: float, spec: VaractorSpec, q: float | None = None) -> float:
    """R_s = 1/(w_q c Q), fixed at the Q reference frequency."""
    q = spec.q_at_f0 if q is None else q
    if math.isinf(q):
        return 0.0
    return 1.0 / (2 * math.pi * spec.f0_q * c * q)


def varactor_impedance(
    c: float, spec: VaractorSpec, f: float, q: float | None = None
) -> complex:
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    if not spec.c_min * (1 - 1e-9) <= c <= spec.c_max * (1 + 1e-9):
        raise ValueError(f"capacitance {c:.4g} F outside [{spec.c_min:.4g}, {spec.c_max:.4g}]")
    return series_resistance(c, spec, q) + 1 / (1j * 2 * math.pi * f * c)


def varactor_cv(v: float, spec: VaractorSpec) -> float:
    if v < 0:
        raise ValueError(f"reverse bias must be >= 0, got {v}")
    c = spec.cv_c0 / (1 + v / spec.cv_vj) ** spec.cv_m
    return min(max(c, spec.c_min), spec.c_max)


def diode_branch(on: bool, spec: DiodeSpec, f: float) -> complex:
    """Patch-to-ground impedance; ``inf`` stands for an absent (open) branch."""
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    w = 2 * math.pi * f
    if on:
        return spec.r_on + 1j * w * spec.l_via
    if spec.c_off == 0:
        return complex(math.inf, 0)
    return 1 / (1j * w * spec.c_off) + 1j * w * spec.l_via


def q_interp(f: float, spec: VaractorSpec) -> float:
    """Q used at frequency ``f``: constant, or linear in a (f, Q) table."""
    lo, hi = spec.q_band
    if not lo <= f <= hi:
        raise ValueError(f"f = {f:.4g} Hz outside Q band [{lo:.4g}, {hi:.4g}]")
    if spec.q_table is None:
        return spec.q_at_f0
    fs, qs = zip(*sorted(spec.q_table))
    return float(np.interp(f, fs, qs))
