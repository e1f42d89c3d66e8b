"""Deterministic writers and readers: CSV, Touchstone, JSON metrics, state files."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import yaml

from .components import ControlState
from .config import ConfigError, calibration_to_dict
from .steering import OBSERVABLES, Anchor, CalibrationConstants
from .twoport import ScatterMatrix

SIG_DIGITS = 9
_FREQ_UNITS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}


def fmt(x: float | int | str | bool) -> str:
    """Fixed 9-significant-digit text; ``NaN`` for not-a-number."""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.{SIG_DIGITS}g}"
    return "0" if s == "-0" else s


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    """Write a comma-separated table with LF endings; returns the row count."""
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
        lines.append(",".join(fmt(v) for v in row))
    write_text(path, "\n".join(lines) + "\n")
    return len(lines) - 1


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def json_safe(obj: Any) -> Any:
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    return obj


def write_json(path: str | Path, data: dict[str, Any]) -> None:
    """Sorted-key JSON, floats rounded to 9 significant digits, non-finite as null."""
    write_text(path, json.dumps(json_safe(data), indent=2, sort_keys=True) + "\n")


# --------------------------------------------------------------- touchstone

def write_touchstone(
    path: str | Path, sweep: Sequence[tuple[float, ScatterMatrix]], z_ref: float = 50.0
) -> None:
    """Two-port Touchstone v1 file in GHz, real/imaginary format.

    Rows are sorted by frequency; the data order is s11 s21 s12 s22.
    """
    if not sweep:
        raise ValueError("empty sweep")
    lines = [f"# GHz S RI R {fmt(z_ref)}"]
    for f, s in sorted(sweep, key=lambda t: t[0]):
        vals = [f / 1e9]
        for x in (s.s11, s.s21, s.s12, s.s22):
            vals += [x.real, x.imag]
        lines.append(" ".join(fmt(v) for v in vals))
    write_text(path, "\n".join(lines) + "\n")


def read_touchstone(path: str | Path) -> list[tuple[float, ScatterMatrix]]:
    """Parse a two-port Touchstone v1 file (RI, MA or DB) into (hertz, S) pairs."""
    unit, fmt_kind, z_ref = 1e9, "MA", 50.0
    numbers: list[float] = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            tok = line[1:].upper().split()
            for i, t in enumerate(tok):
                if t in _FREQ_UNITS:
                    unit = _FREQ_UNITS[t]
                elif t in ("RI", "MA", "DB"):
                    fmt_kind = t
                elif t == "R":
                    z_ref = float(tok[i + 1])
                elif t not in ("S",) and (i == 0 or tok[i - 1] != "R"):
                    raise ValueError(f"unsupported option {t!r} in {path}")
            continue
        numbers += [float(x) for x in line.split()]
    if len(numbers) % 9:
        raise ValueError(f"{path}: expected 9 numbers per frequency point")

    def pair(a: float, b: float) -> complex:
        if fmt_kind == "RI":
            return complex(a, b)
        mag = a if fmt_kind == "MA" else 10 ** (a / 20)
        ang = math.radians(b)
        return complex(mag * math.cos(ang), mag * math.sin(ang))

    out = []
    for k in range(0, len(numbers), 9):
        row = numbers[k : k + 9]
        s11, s21, s12, s22 = (pair(row[i], row[i + 1]) for i in (1, 3, 5, 7))
        out.append((row[0] * unit, ScatterMatrix(s11, s12, s21, s22, z_ref)))
    return out


# ---------------------------------------------------------- state / anchors

def _yaml_error(path: str | Path, key: str, message: str) -> ConfigError:
    return ConfigError(message, key, source=str(path))


def state_to_dict(state: ControlState) -> dict[str, Any]:
    return {
        "capacitances_pf": [float(fmt(c * 1e12)) for c in state.capacitances],
        "diodes_hex": state.diodes_hex,
    }


def write_state(path: str | Path, state: ControlState, extra: dict[str, Any] | None = None) -> None:
    """Loadable state file; ``extra`` goes under an informational ``info`` key."""
    data: dict[str, Any] = {"state": state_to_dict(state)}
    if extra:
        data["info"] = json_safe(extra)
    write_text(path, yaml.safe_dump(data, sort_keys=True, default_flow_style=None))


def state_from_dict(data: Any, source: str = "", key: str = "state") -> ControlState:
    if not isinstance(data, dict):
        raise _yaml_error(source, key, "expected a mapping")
    unknown = set(data) - {"capacitances_pf", "diodes_hex"}
    if unknown:
        raise _yaml_error(source, f"{key}.{sorted(unknown)[0]}", "unknown key")
    caps = data.get("capacitances_pf")
    if not isinstance(caps, list) or not caps:
        raise _yaml_error(source, f"{key}.capacitances_pf", "missing or not a list")
    try:
        caps_f = [float(c) * 1e-12 for c in caps]
    except (TypeError, ValueError):
        raise _yaml_error(source, f"{key}.capacitances_pf", "entries must be numbers") from None
    hex_bits = str(data.get("diodes_hex", "0"))
    try:
        return ControlState.from_hex(caps_f, hex_bits)
    except ValueError as exc:
        raise _yaml_error(source, key, str(exc)) from None


def read_state(path: str | Path) -> ControlState:
    data = _load_yaml(path)
    if not isinstance(data, dict) or "state" not in data:
        raise _yaml_error(path, "state", "missing required key")
    unknown = set(data) - {"state", "info"}
    if unknown:
        raise _yaml_error(path, sorted(unknown)[0], "unknown key")
    return state_from_dict(data["state"], str(path))


def _load_yaml(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"not valid YAML: {exc}", source=str(path)) from exc


def write_calibration(
    path: str | Path, cal: CalibrationConstants, fit: dict[str, Any] | None = None
) -> None:
    data: dict[str, Any] = {"calibration": json_safe(calibration_to_dict(cal))}
    if fit:
        data["fit"] = json_safe(fit)
    write_text(path, yaml.safe_dump(data, sort_keys=True, default_flow_style=False))


_ANCHOR_KEYS = {"c_pf", "index", "state", "f_ghz", "observable", "target", "kind", "weight", "label"}


def read_anchors(path: str | Path, n_cells: int) -> list[Anchor]:
    """Anchor list: each entry has ``f_ghz``, ``observable``, ``target`` and a
    state given either as ``c_pf`` + ``index`` (canonical) or a full ``state``.
    """
    data = _load_yaml(path)
    if not isinstance(data, dict) or not isinstance(data.get("anchors"), list):
        raise _yaml_error(path, "anchors", "expected a list under 'anchors'")
    if set(data) - {"anchors"}:
        raise _yaml_error(path, sorted(set(data) - {"anchors"})[0], "unknown key")
    out = []
    for i, a in enumerate(data["anchors"]):
        key = f"anchors[{i}]"
        if not isinstance(a, dict):
            raise _yaml_error(path, key, "expected a mapping")
        unknown = set(a) - _ANCHOR_KEYS
        if unknown:
            raise _yaml_error(path, f"{key}.{sorted(unknown)[0]}", "unknown key")
        for req in ("f_ghz", "observable", "target"):
            if req not in a:
                raise _yaml_error(path, f"{key}.{req}", "missing required key")
        if a["observable"] not in OBSERVABLES:
            raise _yaml_error(path, f"{key}.observable", f"must be one of {', '.join(OBSERVABLES)}")
        try:
            if "state" in a:
                state = state_from_dict(a["state"], str(path), f"{key}.state")
            else:
                state = ControlState.from_asymmetry(
                    float(a["c_pf"]) * 1e-12, int(a.get("index", 0)), n_cells
                )
            out.append(
                Anchor(
                    state,
                    float(a["f_ghz"]) * 1e9,
                    a["observable"],
                    float(a["target"]),
                    a.get("kind", "eq"),
                    float(a.get("weight", 1.0)),
                    str(a.get("label", "")),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise _yaml_error(path, key, str(exc)) from None
    return out
