"""Command-line front end.

Every command is a pure function of the config file and its flags, and writes
its outputs byte-for-byte reproducibly. Exit codes: 0 success, 2 config or
input error, 3 unreachable steering target, 4 calibration failure, 5 I/O
error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np
import yaml

from . import io
from .components import ControlState
from .config import ConfigError, RunConfig, load_config, shipped_path
from .dispersion import antenna_two_port, dispersion_sample, harmonic_angles
from .steering import (
    DEFAULT_FREE,
    CalibrationError,
    UnreachableTargetError,
    calibrate,
    forward,
    nominal_state,
    reference_anchors,
    q_sensitivity,
    solve_2d,
    steering_map,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNREACHABLE = 3
EXIT_CALIBRATION = 4
EXIT_IO = 5

DISPERSION_HEADER = (
    "f_ghz",
    "beta_rad_per_m",
    "alpha_np_per_m",
    "k0_rad_per_m",
    "theta_n0_deg",
    "theta_nm1_deg",
    "s11_db",
)
PATTERN_HEADER = ("theta_deg", "phi_deg", "gain_dbi")
QSENSE_HEADER = ("f_ghz", "q", "s11_db", "gain_dbi")


def map_header(n_controls: int = 12) -> tuple[str, ...]:
    caps = tuple(f"c_pf_{k}" for k in range(1, n_controls + 1))
    return caps + ("diodes_hex", "theta_deg", "phi_deg", "gain_dbi", "s11_db")


def _db(x: float) -> float:
    return 10 * math.log10(x) if x > 0 else -math.inf


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def frequency_grid(cfg: RunConfig, start: float | None, stop: float | None, step: float) -> np.ndarray:
    lo = cfg.band[0] if start is None else start
    hi = cfg.band[1] if stop is None else stop
    if step <= 0 or hi < lo:
        raise ConfigError(f"invalid frequency grid start={lo:g} stop={hi:g} step={step:g}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    f = lo + step * np.arange(n)
    for x in f:
        cfg.check_frequency(float(x))
    return f


def select_state(cfg: RunConfig, args: argparse.Namespace) -> ControlState:
    n = cfg.geometry.n_cells
    if getattr(args, "state", None):
        state = io.read_state(args.state)
    elif getattr(args, "c_pf", None) is not None:
        state = ControlState.from_asymmetry(args.c_pf * 1e-12, args.index, n)
    else:
        state = nominal_state(cfg.model())
    try:
        state.validate(cfg.specs.varactor, n)
    except ValueError as exc:
        raise ConfigError(str(exc), "state") from None
    return state


# ----------------------------------------------------------------- commands

def cmd_show_config(cfg: RunConfig, args: argparse.Namespace) -> int:
    text = yaml.safe_dump(io.json_safe(cfg.summary()), sort_keys=False)
    if args.out:
        io.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_dispersion(cfg: RunConfig, args: argparse.Namespace) -> int:
    model = cfg.model()
    state = select_state(cfg, args)
    d = cfg.geometry.cell_period
    rows = []
    for f in frequency_grid(cfg, args.f_start, args.f_stop, args.f_step):
        f = float(f)
        disp = dispersion_sample(cfg.geometry, state, model.cal, f, model.specs)
        s = antenna_two_port(cfg.geometry, state, model.cal, f, model.specs, disp=disp)
        th = {h.n: h.theta_n for h in harmonic_angles(disp.beta, disp.alpha, f, d, (0, -1))}
        rows.append(
            (f / 1e9, disp.beta, disp.alpha, disp.k0, th[0], th[-1], min(_db(abs(s.s11) ** 2), 0.0))
        )
    io.write_csv(args.out, DISPERSION_HEADER, rows)
    return EXIT_OK


def cmd_pattern(cfg: RunConfig, args: argparse.Namespace) -> int:
    cfg.check_frequency(args.f)
    state = select_state(cfg, args)
    sol, pat = forward(cfg.model(), state, args.f, with_pattern=True)
    gain = 4 * math.pi * pat.u
    rows = (
        (float(t), float(p), _db(float(gain[i, j])))
        for i, t in enumerate(pat.theta)
        for j, p in enumerate(pat.phi)
    )
    io.write_csv(args.out, PATTERN_HEADER, rows)
    metrics = {
        "f_ghz": args.f / 1e9,
        "peak": {"theta_deg": sol.theta_peak, "phi_deg": sol.phi_peak},
        "hpbw_deg": {"theta": sol.hpbw_theta, "phi": sol.hpbw_phi},
        "realized_gain_dbi": sol.realized_gain_dbi,
        "directivity_dbi": sol.directivity_dbi,
        "s11_db": sol.s11_db,
        "budget": {
            "reflected": sol.budget.p_reflected,
            "through": sol.budget.p_through,
            "radiated": sol.budget.p_radiated,
            "dissipated": sol.budget.p_dissipated,
            "radiation_efficiency": sol.radiation_efficiency,
        },
        "harmonic": sol.harmonic,
        "beam_valid": sol.beam_valid,
        "alpha_over_k0": sol.alpha_over_k0,
        "flags": list(sol.flags),
        "state": io.state_to_dict(state),
    }
    io.write_json(args.metrics or Path(args.out).with_suffix(".json"), metrics)
    return EXIT_OK


def cmd_map(cfg: RunConfig, args: argparse.Namespace) -> int:
    cfg.check_frequency(args.f)
    grid = None if args.c_grid_pf is None else [c * 1e-12 for c in args.c_grid_pf]
    if grid is not None and not grid:
        raise ConfigError("empty capacitance grid", "c_grid_pf")
    smap = steering_map(cfg.model(), args.f, grid, args.indices)
    rows = [
        tuple(c * 1e12 for c in e.state.capacitances)
        + (e.state.diodes_hex, e.theta_peak, e.phi_peak, e.realized_gain_dbi, e.s11_db)
        for e in smap.entries
    ]
    io.write_csv(args.out, map_header(2 * cfg.geometry.n_cells), rows)
    return EXIT_OK


def cmd_steer(cfg: RunConfig, args: argparse.Namespace) -> int:
    cfg.check_frequency(args.f)
    res = solve_2d(cfg.model(), (args.theta, args.phi), args.f)
    sol = res.solution
    info = {
        "f_ghz": args.f / 1e9,
        "target_deg": [args.theta, args.phi],
        "achieved_deg": [sol.theta_peak, sol.phi_peak],
        "error_deg": res.error,
        "realized_gain_dbi": sol.realized_gain_dbi,
        "nearest": res.nearest,
    }
    io.write_state(args.out, sol.state, info)
    caps = ",".join(io.fmt(c * 1e12) for c in sol.state.capacitances)
    print(
        f"state c_pf={caps} diodes_hex={sol.state.diodes_hex} "
        f"theta_deg={io.fmt(sol.theta_peak)} phi_deg={io.fmt(sol.phi_peak)} "
        f"gain_dbi={io.fmt(sol.realized_gain_dbi)} error_deg={io.fmt(res.error)}"
    )
    if res.nearest:
        raise UnreachableTargetError(
            f"target theta_deg={io.fmt(args.theta)} phi_deg={io.fmt(args.phi)} not reachable; "
            f"nearest theta_deg={io.fmt(sol.theta_peak)} phi_deg={io.fmt(sol.phi_peak)} "
            f"error_deg={io.fmt(res.error)}",
            (sol.theta_peak, sol.phi_peak),
        )
    return EXIT_OK


def cmd_qsense(cfg: RunConfig, args: argparse.Namespace) -> int:
    state = select_state(cfg, args)
    freqs = frequency_grid(cfg, args.f_start, args.f_stop, args.f_step)
    if not args.q or any(q <= 0 for q in args.q):
        raise ConfigError("q values must be positive and nonempty", "q")
    rows = q_sensitivity(cfg.model(), [float(f) for f in freqs], args.q, state)
    io.write_csv(
        args.out, QSENSE_HEADER, [(r["f"] / 1e9, r["q"], r["s11_db"], r["gain_dbi"]) for r in rows]
    )
    return EXIT_OK


def cmd_touchstone(cfg: RunConfig, args: argparse.Namespace) -> int:
    model = cfg.model()
    state = select_state(cfg, args)
    sweep = [
        (float(f), antenna_two_port(cfg.geometry, state, model.cal, float(f), model.specs))
        for f in frequency_grid(cfg, args.f_start, args.f_stop, args.f_step)
    ]
    io.write_touchstone(args.out, sweep)
    return EXIT_OK


def cmd_calibrate(cfg: RunConfig, args: argparse.Namespace) -> int:
    model = cfg.model()
    if args.anchors:
        anchors = io.read_anchors(args.anchors, cfg.geometry.n_cells)
    else:
        anchors = reference_anchors(model)
    free = tuple(args.free) if args.free else DEFAULT_FREE
    try:
        result = calibrate(model, anchors, free, initial=model.cal, max_iter=args.max_iter)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), "anchors") from None
    print(result.report())
    fit = {
        "free": list(free),
        "converged": result.converged,
        "iterations": result.iterations,
        "residuals": {
            (a.label or f"{a.observable}[{i}]"): r
            for i, (a, r) in enumerate(zip(result.anchors, result.residuals))
        },
    }
    io.write_calibration(args.out, result.constants, fit)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hwmlwa",
        description="Reduced-order simulator and beam-steering solver for a "
        "varactor- and diode-loaded half-width microstrip leaky-wave antenna.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        default=None,
        help="run configuration (YAML); default: the shipped nominal.yaml",
    )
    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", help="state file written by 'steer'")
    state.add_argument("--c-pf", type=float, help="uniform varactor capacitance in pF")
    state.add_argument("--index", type=int, default=0, help="diode asymmetry index N_L - N_R")
    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--f-start", type=float, help="first frequency in Hz (default: band start)")
    sweep.add_argument("--f-stop", type=float, help="last frequency in Hz (default: band stop)")
    sweep.add_argument("--f-step", type=float, default=0.5e9, help="frequency step in Hz")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("show-config", parents=[common], help="print the resolved configuration")
    p.add_argument("-o", "--out", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_show_config)

    p = sub.add_parser(
        "calibrate",
        parents=[common],
        help="fit calibration constants to anchors, starting from the configured ones",
    )
    p.add_argument("--anchors", help="anchor file (YAML); default: built-in 31 GHz anchor set")
    p.add_argument("--free", type=lambda s: s.split(","), help="comma-separated constants to fit")
    p.add_argument("--max-iter", type=int, default=4000)
    p.add_argument("-o", "--out", required=True, help="calibration file to write")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser(
        "dispersion", parents=[common, state, sweep], help="beta, alpha and beam angle versus frequency"
    )
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("pattern", parents=[common, state], help="realized-gain pattern of one state")
    p.add_argument("--f", type=float, required=True, help="frequency in Hz")
    p.add_argument("-o", "--out", required=True, help="pattern CSV")
    p.add_argument("--metrics", help="metrics JSON (default: CSV path with .json suffix)")
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("map", parents=[common], help="steering map over capacitance x asymmetry")
    p.add_argument("--f", type=float, required=True, help="frequency in Hz")
    p.add_argument("--c-grid-pf", type=_floats, help="comma-separated capacitances in pF")
    p.add_argument("--indices", type=_ints, help="comma-separated asymmetry indices")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("steer", parents=[common], help="solve the control state for a direction")
    p.add_argument("--theta", type=float, required=True, help="target theta in degrees")
    p.add_argument("--phi", type=float, required=True, help="target phi in degrees")
    p.add_argument("--f", type=float, required=True, help="frequency in Hz")
    p.add_argument("-o", "--out", default="state.yaml", help="state file to write")
    p.set_defaults(func=cmd_steer)

    p = sub.add_parser("qsense", parents=[common, state, sweep], help="varactor Q sensitivity")
    p.add_argument("--q", type=_floats, default=[10.0, 20.0], help="comma-separated Q values")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_qsense)

    p = sub.add_parser("touchstone", parents=[common, state, sweep], help="two-port S-parameters")
    p.add_argument("-o", "--out", required=True, help=".s2p file")
    p.set_defaults(func=cmd_touchstone)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config or shipped_path("nominal.yaml"))
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnreachableTargetError as exc:
        print(f"error: unreachable: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except CalibrationError as exc:
        print(f"error: calibration: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
