"""Forward beam evaluation, calibration, inverse solvers and steering studies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Iterable, Sequence

import numpy as np

from .components import ControlState, DeviceSpecs
from .dispersion import (
    AntennaGeometry,
    DispersionSample,
    PowerBudget,
    dispersion_sample,
    harmonic_angles,
    power_budget,
)
from .farfield import (
    FarfieldOptions,
    PatternMetrics,
    RadiationPattern,
    build_aperture,
    compute_pattern,
    pattern_metrics,
)


class CalibrationError(RuntimeError):
    def __init__(self, message: str, residuals: Sequence[float] = ()):
        super().__init__(message)
        self.residuals = list(residuals)


class UnreachableTargetError(ValueError):
    def __init__(self, message: str, interval: tuple[float, float]):
        super().__init__(message)
        self.interval = interval


@dataclass(frozen=True)
class CalibrationConstants:
    """Fitted constants of the reduced-order model.

    ``c_fringe_per_m`` is signed: it is the edge susceptance offset relative
    to the unloaded open edge, not a physical fringe capacitance.
    """

    # defaults: fit to the shipped 31 GHz anchor set (scripts/calibrate_nominal.py)
    c_gap: float = 0.161668345e-12
    c_fringe_per_m: float = -17.543087e-12
    g_leak: float = 0.269590855
    sigma: float = 0.3
    psi0: float = 1.12293742
    y_offset: float = 1.25e-3

    def __post_init__(self) -> None:
        for name in ("c_gap", "g_leak", "sigma", "psi0", "y_offset"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.sigma > 1:
            raise ValueError("sigma must be <= 1")

    def as_dict(self) -> dict[str, float]:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}


# documented starting point of the calibration search
INITIAL_GUESS = CalibrationConstants(
    c_gap=0.155e-12,
    c_fringe_per_m=-17.4e-12,
    g_leak=0.1,
    sigma=0.3,
    psi0=1.0,
    y_offset=1.25e-3,
)


@dataclass(frozen=True)
class SolverOptions:
    theta_tol: float = 1.0
    c_tol: float = 1e-15
    cd_passes: int = 3
    gain_drop_db: float = 2.0
    gain_penalty: float = 2.0
    scan_points: int = 17


@dataclass(frozen=True)
class AntennaModel:
    geom: AntennaGeometry = field(default_factory=AntennaGeometry)
    specs: DeviceSpecs = field(default_factory=DeviceSpecs)
    cal: CalibrationConstants = field(default_factory=CalibrationConstants)
    farfield: FarfieldOptions = field(default_factory=FarfieldOptions)
    solver: SolverOptions = field(default_factory=SolverOptions)

    def with_cal(self, cal: CalibrationConstants) -> AntennaModel:
        return replace(self, cal=cal)

    def with_q(self, q: float) -> AntennaModel:
        return replace(self, specs=replace(self.specs, varactor=self.specs.varactor.with_q(q)))


@dataclass(frozen=True)
class BeamSolution:
    theta_peak: float
    phi_peak: float
    realized_gain_dbi: float
    directivity_dbi: float
    s11_db: float
    budget: PowerBudget
    state: ControlState
    f: float
    hpbw_theta: float
    hpbw_phi: float
    harmonic: int | None
    beam_valid: bool
    on_boundary: bool
    alpha_over_k0: float
    mean_beta: float
    flags: tuple[str, ...] = ()

    @property
    def radiation_efficiency(self) -> float:
        return self.budget.radiation_efficiency


def _db(x: float) -> float:
    return 10 * math.log10(x) if x > 0 else -math.inf


def forward(
    model: AntennaModel, state: ControlState, f: float, with_pattern: bool = False
) -> BeamSolution | tuple[BeamSolution, RadiationPattern]:
    """Dispersion, aperture, pattern, metrics and power budget of one state."""
    geom, ff = model.geom, model.farfield
    state.validate(model.specs.varactor, geom.n_cells)
    disp = dispersion_sample(geom, state, model.cal, f, model.specs)
    budget, s = power_budget(geom, state, model.cal, f, model.specs, disp=disp)
    ap = build_aperture(geom, state, model.cal, disp, ff.sub_samples_per_cell)
    pat = compute_pattern(ap, f, ff.grid, ff.element_exponent, max(budget.p_radiated, 1e-300))
    m = pattern_metrics(pat, budget)
    sol = _solution(m, budget, s.s11, state, f, disp, ap.mean_beta, ap.mean_alpha, geom)
    return (sol, pat) if with_pattern else sol


def _solution(
    m: PatternMetrics,
    budget: PowerBudget,
    s11: complex,
    state: ControlState,
    f: float,
    disp: DispersionSample,
    beta_bar: float,
    alpha_bar: float,
    geom: AntennaGeometry,
) -> BeamSolution:
    harmonics = [
        h for h in harmonic_angles(beta_bar, alpha_bar, f, geom.cell_period) if h.radiating
    ]
    harmonic = None
    if harmonics:
        harmonic = min(harmonics, key=lambda h: abs(h.theta_n - m.theta_peak)).n
    flags = []
    if not harmonics:
        flags.append("no_visible_harmonic")
    if len(harmonics) > 1:
        flags.append("multiple_harmonics")
    if m.on_boundary:
        flags.append("peak_on_grid_boundary")
    if m.hpbw_truncated:
        flags.append("hpbw_truncated")
    if any(c.evanescent for c in disp.per_cell):
        flags.append("evanescent_cell")
    return BeamSolution(
        theta_peak=m.theta_peak,
        phi_peak=m.phi_peak,
        realized_gain_dbi=m.realized_gain_dbi,
        directivity_dbi=m.directivity_dbi,
        s11_db=min(_db(abs(s11) ** 2), 0.0),
        budget=budget,
        state=state,
        f=f,
        hpbw_theta=m.hpbw_theta,
        hpbw_phi=m.hpbw_phi,
        harmonic=harmonic,
        beam_valid=len(harmonics) == 1 and not m.on_boundary,
        on_boundary=m.on_boundary,
        alpha_over_k0=alpha_bar / disp.k0,
        mean_beta=beta_bar,
        flags=tuple(flags),
    )


def angular_error(theta1: float, phi1: float, theta2: float, phi2: float) -> float:
    """Great-circle angle in degrees between two (theta, phi) directions."""

    def vec(t: float, p: float) -> np.ndarray:
        t, p = math.radians(t), math.radians(p)
        return np.array([math.sin(t), math.cos(t) * math.sin(p), math.cos(t) * math.cos(p)])

    c = float(np.clip(vec(theta1, phi1) @ vec(theta2, phi2), -1.0, 1.0))
    return math.degrees(math.acos(c))


# ---------------------------------------------------------------- calibration

OBSERVABLES = ("theta", "phi", "efficiency", "gain", "radiated", "hpbw_theta", "hpbw_phi")


@dataclass(frozen=True)
class Anchor:
    """One calibration target.

    ``kind`` is ``"eq"`` for a target value, ``"min"``/``"max"`` for a bound.
    Residuals are in degrees for angles, dB for gain and percentage points
    for efficiency/radiated fraction, before ``weight``.
    """

    state: ControlState
    f: float
    observable: str
    target: float
    kind: str = "eq"
    weight: float = 1.0
    label: str = ""

    def __post_init__(self) -> None:
        if self.observable not in OBSERVABLES:
            raise ValueError(f"unknown observable {self.observable!r}")
        if self.kind not in ("eq", "min", "max"):
            raise ValueError(f"unknown anchor kind {self.kind!r}")

    @property
    def is_angle(self) -> bool:
        return self.observable in ("theta", "phi")


def observe(model: AntennaModel, anchor: Anchor, sol: BeamSolution | None = None) -> float:
    """Value of the anchor's observable; ``sol`` reuses a forward result."""
    obs = anchor.observable
    if sol is None:
        sol = forward(model, anchor.state, anchor.f)
    if obs == "efficiency":
        return sol.radiation_efficiency
    if obs == "radiated":
        return sol.budget.p_radiated
    return {
        "theta": sol.theta_peak,
        "phi": sol.phi_peak,
        "gain": sol.realized_gain_dbi,
        "hpbw_theta": sol.hpbw_theta,
        "hpbw_phi": sol.hpbw_phi,
    }[obs]


def anchor_residual(anchor: Anchor, value: float) -> float:
    scale = 100.0 if anchor.observable in ("efficiency", "radiated") else 1.0
    r = (value - anchor.target) * scale
    if anchor.kind == "min":
        r = min(r, 0.0)
    elif anchor.kind == "max":
        r = max(r, 0.0)
    return r


# (name, to-internal, from-internal); log/logit keep positive/bounded params feasible
_TRANSFORMS = {
    "c_gap": (lambda v: math.log(v / 1e-12), lambda z: 1e-12 * math.exp(z)),
    "c_fringe_per_m": (lambda v: v / 1e-11, lambda z: z * 1e-11),
    "g_leak": (lambda v: math.log(v), lambda z: math.exp(z)),
    "sigma": (
        lambda v: math.log(v / (1 - v)),
        lambda z: 1 / (1 + math.exp(-z)),
    ),
    "psi0": (lambda v: math.log(v), lambda z: math.exp(z)),
    "y_offset": (lambda v: math.log(v / 1e-3), lambda z: 1e-3 * math.exp(z)),
}

DEFAULT_FREE = ("c_gap", "c_fringe_per_m", "g_leak", "psi0")


@dataclass(frozen=True)
class CalibrationResult:
    constants: CalibrationConstants
    anchors: tuple[Anchor, ...]
    values: tuple[float, ...]
    residuals: tuple[float, ...]
    converged: bool
    iterations: int

    @property
    def max_angle_residual(self) -> float:
        r = [abs(x) for a, x in zip(self.anchors, self.residuals) if a.is_angle]
        return max(r, default=0.0)

    def report(self) -> str:
        lines = []
        for a, v, r in zip(self.anchors, self.values, self.residuals):
            lines.append(
                f"{a.label or a.observable:>24s}  f={a.f / 1e9:6.2f} GHz  "
                f"target={a.target:9.4f} ({a.kind})  got={v:9.4f}  residual={r:+.4f}"
            )
        return "\n".join(lines)


def loading_margin(cal: CalibrationConstants, model: AntennaModel) -> float:
    """Per-side edge capacitance per meter at ``c_min``; must stay positive."""
    c = model.specs.varactor.c_min
    series = cal.c_gap * c / (cal.c_gap + c)
    return series / model.geom.cell_period + cal.c_fringe_per_m


def calibrate(
    model: AntennaModel,
    anchors: Sequence[Anchor],
    free: Sequence[str] = DEFAULT_FREE,
    initial: CalibrationConstants | None = None,
    max_iter: int = 4000,
    angle_limit: float = 10.0,
) -> CalibrationResult:
    """Least-squares fit of the calibration constants to anchor observables.

    Nelder-Mead (derivative-free) in transformed coordinates, started from
    ``initial`` (default :data:`INITIAL_GUESS`) and restarted once from its
    own optimum.

    Raises:
        ValueError: fewer anchors than free constants.
        CalibrationError: no convergence, or an angle anchor misses by more
            than ``angle_limit`` degrees.
    """
    from scipy.optimize import minimize

    anchors = tuple(anchors)
    if not anchors:
        raise ValueError("calibration needs at least one anchor")
    if len(anchors) < len(free):
        raise ValueError(f"{len(anchors)} anchors cannot determine {len(free)} constants")
    for name in free:
        if name not in _TRANSFORMS:
            raise ValueError(f"unknown calibration constant {name!r}")
    start = initial or INITIAL_GUESS

    def unpack(z: np.ndarray) -> CalibrationConstants:
        vals = {n: _TRANSFORMS[n][1](float(zi)) for n, zi in zip(free, z)}
        return replace(start, **vals)

    def evaluate(cal: CalibrationConstants) -> tuple[list[float], list[float]]:
        m = model.with_cal(cal)
        sols: dict[tuple[ControlState, float], BeamSolution] = {}
        for a in anchors:
            if (a.state, a.f) not in sols:
                sols[a.state, a.f] = forward(m, a.state, a.f)
        values = [observe(m, a, sols[a.state, a.f]) for a in anchors]
        res = [anchor_residual(a, v) * a.weight for a, v in zip(anchors, values)]
        return values, res

    def objective(z: np.ndarray) -> float:
        cal = unpack(z)
        # keep per-side loading positive at c_min so theta(C) cannot go flat
        margin = loading_margin(cal, model)
        penalty = (100.0 * min(margin, 0.0) / 1e-12) ** 2
        try:
            _, res = evaluate(cal)
        except (ValueError, OverflowError):
            return 1e12
        return float(sum(r * r for r in res)) + penalty

    z = np.array([_TRANSFORMS[n][0](getattr(start, n)) for n in free])
    iterations = 0
    converged = False
    opts = {"xatol": 1e-6, "fatol": 1e-10, "maxiter": max_iter, "adaptive": True}
    for _ in range(2):
        out = minimize(objective, z, method="Nelder-Mead", options=opts)
        iterations += int(out.nit)
        z = out.x
        converged = bool(out.success)
    cal = unpack(z)
    values, res = evaluate(cal)
    result = CalibrationResult(cal, anchors, tuple(values), tuple(res), converged, iterations)
    if not converged:
        raise CalibrationError(
            f"calibration did not converge in {iterations} iterations\n{result.report()}", res
        )
    if result.max_angle_residual > angle_limit:
        raise CalibrationError(
            f"angle residual {result.max_angle_residual:.2f} deg exceeds {angle_limit} deg\n"
            + result.report(),
            res,
        )
    return result


def nominal_state(model: AntennaModel) -> ControlState:
    """Uniform state at the geometric mean of the varactor range, all diodes open."""
    vs = model.specs.varactor
    return ControlState.uniform(math.sqrt(vs.c_min * vs.c_max), model.geom.n_cells)


def reference_anchors(model: AntennaModel, c_nominal: float | None = None) -> list[Anchor]:
    """Anchors read from the reported 31 GHz steering endpoints and headline figures.

    theta: -34 deg at 0.2 pF, +52 deg at 1 pF. phi: -52 deg / +38 deg at the
    two one-sided shorting extremes (positive phi for left-side shorting).
    Nominal state: efficiency at least 0.8 and realized gain 8 dBi.
    """
    n = model.geom.n_cells
    vs = model.specs.varactor
    f = 31e9
    if c_nominal is None:
        c_nominal = math.sqrt(vs.c_min * vs.c_max)
    nominal = ControlState.uniform(c_nominal, n)
    return [
        Anchor(ControlState.uniform(vs.c_min, n), f, "theta", -34.0, label="theta@c_min"),
        Anchor(ControlState.uniform(vs.c_max, n), f, "theta", 52.0, label="theta@c_max"),
        Anchor(ControlState.from_asymmetry(c_nominal, -n, n), f, "phi", -52.0, label="phi@all-right"),
        Anchor(ControlState.from_asymmetry(c_nominal, n, n), f, "phi", 38.0, label="phi@all-left"),
        Anchor(nominal, f, "efficiency", 0.8, kind="min", label="efficiency@nominal"),
        Anchor(nominal, f, "gain", 8.0, label="gain@nominal"),
    ]


# ------------------------------------------------------------------ inverse

def _theta_at(model: AntennaModel, c: float, f: float, index: int) -> BeamSolution:
    state = ControlState.from_asymmetry(c, index, model.geom.n_cells)
    return forward(model, state, f)


def theta_scan(
    model: AntennaModel, f: float, index: int = 0, points: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    vs = model.specs.varactor
    n = points or model.solver.scan_points
    cs = np.linspace(vs.c_min, vs.c_max, n)
    th = np.array([_theta_at(model, float(c), f, index).theta_peak for c in cs])
    return cs, th


def solve_theta(
    model: AntennaModel,
    target_theta: float,
    f: float,
    index: int = 0,
    tol: float | None = None,
    scan: tuple[np.ndarray, np.ndarray] | None = None,
) -> float:
    """Uniform capacitance that points the beam at ``target_theta``.

    A coarse scan brackets the target inside a segment where theta(C) is
    increasing; bisection then runs until the angle is within ``tol`` degrees
    or the bracket is narrower than ``solver.c_tol``.

    Raises:
        UnreachableTargetError: target outside the scanned theta interval.
    """
    tol = model.solver.theta_tol if tol is None else tol
    cs, th = scan if scan is not None else theta_scan(model, f, index)
    interval = (float(np.min(th)), float(np.max(th)))
    for c, t in zip(cs, th):
        if abs(t - target_theta) <= tol and (c in (cs[0], cs[-1])):
            return float(c)
    bracket = None
    for k in range(len(cs) - 1):
        if th[k] <= target_theta <= th[k + 1]:
            bracket = (float(cs[k]), float(cs[k + 1]), float(th[k]), float(th[k + 1]))
            break
    if bracket is None:
        raise UnreachableTargetError(
            f"theta {target_theta:.2f} deg outside reachable [{interval[0]:.2f}, {interval[1]:.2f}]"
            f" at {f / 1e9:.3f} GHz",
            interval,
        )
    lo, hi, t_lo, t_hi = bracket
    if abs(t_lo - target_theta) <= tol:
        return lo
    if abs(t_hi - target_theta) <= tol:
        return hi
    while hi - lo > model.solver.c_tol:
        mid = 0.5 * (lo + hi)
        t = _theta_at(model, mid, f, index).theta_peak
        if abs(t - target_theta) <= tol:
            return mid
        if t < target_theta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SteeringMap:
    f: float
    entries: tuple[BeamSolution, ...]
    theta_range: tuple[float, float]
    phi_range: tuple[float, float]
    hull: tuple[tuple[float, float], ...]

    def valid(self) -> list[BeamSolution]:
        return [e for e in self.entries if e.beam_valid]

    def gain_ripple(self) -> float:
        g = [e.realized_gain_dbi for e in self.valid()]
        return max(g) - min(g) if g else math.nan

    def median_gain(self) -> float:
        return float(np.median([e.realized_gain_dbi for e in self.valid()]))

    @property
    def theta_span(self) -> float:
        return self.theta_range[1] - self.theta_range[0]


def steering_map(
    model: AntennaModel,
    f: float,
    c_grid: Iterable[float] | None = None,
    indices: Iterable[int] | None = None,
) -> SteeringMap:
    """Forward solutions over capacitance grid x asymmetry indices.

    Duplicate grid values are dropped. Ranges and the convex hull are taken
    over entries with a valid (visible, interior) main beam.
    """
    from scipy.spatial import ConvexHull, QhullError

    vs = model.specs.varactor
    n = model.geom.n_cells
    grid = np.linspace(vs.c_min, vs.c_max, 9) if c_grid is None else c_grid
    cs = sorted({float(c) for c in grid})
    if not cs:
        raise ValueError("empty capacitance grid")
    idx = sorted(set(range(-n, n + 1) if indices is None else indices))
    entries = tuple(
        forward(model, ControlState.from_asymmetry(c, k, n), f) for c in cs for k in idx
    )
    pts = np.array([(e.theta_peak, e.phi_peak) for e in entries if e.beam_valid])
    if len(pts) == 0:
        return SteeringMap(f, entries, (math.nan, math.nan), (math.nan, math.nan), ())
    hull: tuple[tuple[float, float], ...] = ()
    try:
        h = ConvexHull(pts)
        hull = tuple((float(pts[v, 0]), float(pts[v, 1])) for v in h.vertices)
    except (QhullError, ValueError):
        pass
    return SteeringMap(
        f,
        entries,
        (float(pts[:, 0].min()), float(pts[:, 0].max())),
        (float(pts[:, 1].min()), float(pts[:, 1].max())),
        hull,
    )


_MAP_CACHE: dict[tuple, float] = {}


def _map_median_gain(model: AntennaModel, f: float) -> float:
    key = (model, f)
    if key not in _MAP_CACHE:
        _MAP_CACHE[key] = steering_map(model, f).median_gain()
    return _MAP_CACHE[key]


@dataclass(frozen=True)
class SolveResult:
    solution: BeamSolution
    target: tuple[float, float]
    error: float
    nearest: bool

    @property
    def state(self) -> ControlState:
        return self.solution.state


def solve_2d(
    model: AntennaModel,
    target: tuple[float, float],
    f: float,
    refine: bool = True,
    precision: float = 10.0,
) -> SolveResult:
    """Control state whose beam points closest to ``target = (theta, phi)``.

    Enumerates the canonical asymmetry indices, solves the uniform capacitance
    for theta at each, then refines per-varactor capacitances by coordinate
    descent. The objective is the great-circle error plus
    ``solver.gain_penalty`` degrees per dB of realized gain below
    (map median - ``solver.gain_drop_db``). Unreachable targets return the
    nearest solution flagged ``nearest``.
    """
    opts = model.solver
    n = model.geom.n_cells
    t_theta, t_phi = target
    floor = _map_median_gain(model, f) - opts.gain_drop_db

    def cost(sol: BeamSolution) -> float:
        err = angular_error(sol.theta_peak, sol.phi_peak, t_theta, t_phi)
        if not sol.beam_valid:
            err += 90.0
        return err + opts.gain_penalty * max(0.0, floor - sol.realized_gain_dbi)

    scan = theta_scan(model, f, 0)
    outside = not (scan[1].min() <= t_theta <= scan[1].max())
    try:
        c0 = solve_theta(model, t_theta, f, 0, scan=scan)
    except UnreachableTargetError:
        c0 = float(scan[0][np.argmin(np.abs(scan[1] - t_theta))])

    best: BeamSolution | None = None
    best_cost = math.inf
    for k in range(-n, n + 1):
        # theta(C) barely depends on the diode pattern; bracket near the index-0 solution
        c = _local_theta(model, t_theta, f, k, c0)
        sol = forward(model, ControlState.from_asymmetry(c, k, n), f)
        j = cost(sol)
        if j < best_cost:
            best, best_cost = sol, j
    assert best is not None

    if refine and angular_error(best.theta_peak, best.phi_peak, t_theta, t_phi) > opts.theta_tol:
        best, best_cost = _coordinate_descent(model, best, best_cost, cost, f)

    err = angular_error(best.theta_peak, best.phi_peak, t_theta, t_phi)
    return SolveResult(best, (t_theta, t_phi), err, outside or err > precision)


def _local_theta(model: AntennaModel, target: float, f: float, index: int, c0: float) -> float:
    vs = model.specs.varactor
    width = 0.05e-12
    while True:
        lo, hi = max(vs.c_min, c0 - width), min(vs.c_max, c0 + width)
        t_lo = _theta_at(model, lo, f, index).theta_peak
        t_hi = _theta_at(model, hi, f, index).theta_peak
        if t_lo <= target <= t_hi or (lo == vs.c_min and hi == vs.c_max):
            break
        width *= 4
    if not t_lo <= target <= t_hi:
        return lo if abs(t_lo - target) < abs(t_hi - target) else hi
    scan = (np.array([lo, hi]), np.array([t_lo, t_hi]))
    return solve_theta(model, target, f, index, scan=scan)


def _coordinate_descent(model, best, best_cost, cost, f):
    vs = model.specs.varactor
    step0 = 0.1 * (vs.c_max - vs.c_min)
    for _ in range(model.solver.cd_passes):
        improved = False
        for k in range(2 * model.geom.n_cells):
            step = step0
            while step > 0.005 * (vs.c_max - vs.c_min):
                moved = False
                for sgn in (1, -1):
                    c = best.state.capacitances[k] + sgn * step
                    if not vs.c_min <= c <= vs.c_max:
                        continue
                    sol = forward(model, best.state.with_capacitance(k, c), f)
                    j = cost(sol)
                    if j < best_cost - 1e-9:
                        best, best_cost, moved, improved = sol, j, True, True
                        break
                if not moved:
                    step /= 2
        if not improved:
            break
    return best, best_cost


def q_sensitivity(
    model: AntennaModel,
    freqs: Iterable[float],
    q_values: Sequence[float],
    state: ControlState,
) -> list[dict[str, float]]:
    """S11 and realized gain per (f, Q), with gain deltas to the highest-Q row."""
    if not q_values:
        raise ValueError("q_values must be nonempty")
    q_ref = max(q_values)
    rows = []
    for f in freqs:
        sols = {q: forward(model.with_q(q), state, f) for q in sorted(set(q_values))}
        for q in q_values:
            s = sols[q]
            rows.append(
                {
                    "f": float(f),
                    "q": float(q),
                    "s11_db": s.s11_db,
                    "gain_dbi": s.realized_gain_dbi,
                    "delta_gain_db": s.realized_gain_dbi - sols[q_ref].realized_gain_dbi,
                    "efficiency": s.radiation_efficiency,
                }
            )
    return rows
