"""Run configuration: strict YAML schema, unit conversion and model assembly.

Config files use engineering units in the key names (``height_mm``,
``c_min_pf``, ``band_ghz``); everything is converted to SI on load. Unknown
keys, missing required keys and out-of-range values raise
:class:`ConfigError` with the dotted key path and the source line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import yaml

from .components import DeviceSpecs, DiodeSpec, VaractorSpec
from .dispersion import AntennaGeometry
from .farfield import FarfieldOptions, GridSpec
from .steering import AntennaModel, CalibrationConstants, SolverOptions
from .twoport import SubstrateSpec

BAND_LIMITS_HZ = (20e9, 50e9)


class ConfigError(ValueError):
    """Invalid configuration, with the offending key path and line."""

    def __init__(self, message: str, key: str = "", line: int | None = None, source: str = ""):
        self.key = key
        self.line = line
        self.source = source
        where = ":".join(str(p) for p in (source, line) if p not in ("", None))
        prefix = ": ".join(p for p in (where, key) if p)
        super().__init__(f"{prefix}: {message}" if prefix else message)


@dataclass(frozen=True)
class _Key:
    kind: str
    default: Any = None
    required: bool = False
    lo: float | None = None
    hi: float | None = None
    lo_open: bool = False


def _num(default=None, lo=None, hi=None, required=False, lo_open=False) -> _Key:
    return _Key("float", default, required, lo, hi, lo_open)


_SCHEMA: dict[str, dict[str, _Key]] = {
    "substrate": {
        "eps_r": _num(required=True, lo=1.0),
        "tan_delta": _num(required=True, lo=0.0),
        "height_mm": _num(required=True, lo=0.0, lo_open=True),
    },
    "geometry": {
        "length_mm": _num(39.0, lo=0.0, lo_open=True),
        "port_to_port_mm": _num(45.0, lo=0.0, lo_open=True),
        "width_feed_mm": _num(2.0, lo=0.0, lo_open=True),
        "width_mid_mm": _num(2.5, lo=0.0, lo_open=True),
        "cell_period_mm": _num(5.0, lo=0.0, lo_open=True),
        "n_cells": _Key("int", 6, lo=1),
        "sub_segments": _Key("int", 8, lo=2),
        "feed_impedance_ohm": _Key("float|null", 50.0, lo=0.0, lo_open=True),
    },
    "varactor": {
        "c_min_pf": _num(0.2, lo=0.0, lo_open=True),
        "c_max_pf": _num(1.0, lo=0.0, lo_open=True),
        "q": _num(15.0, lo=0.0, lo_open=True),
        "q_ref_ghz": _num(31.0, lo=0.0, lo_open=True),
        "q_band_ghz": _Key("pair", (28.0, 34.0)),
        "q_table": _Key("table|null", None),
        "cv_c0_pf": _num(1.0, lo=0.0, lo_open=True),
        "cv_vj": _num(0.7, lo=0.0, lo_open=True),
        "cv_m": _num(0.5, lo=0.0, lo_open=True),
    },
    "diode": {
        "r_on_ohm": _num(1.0, lo=0.0),
        "c_off_ff": _num(25.0, lo=0.0),
        "l_via_ph": _num(30.0, lo=0.0),
    },
    "calibration": {
        "c_gap_pf": _num(None, lo=0.0),
        "c_fringe_pf_per_m": _num(None),
        "g_leak": _num(None, lo=0.0),
        "sigma": _num(None, lo=0.0, hi=1.0),
        "psi0": _num(None, lo=0.0),
        "y_offset_mm": _num(None, lo=0.0),
    },
    "solver": {
        "theta_tol_deg": _num(1.0, lo=0.0, lo_open=True),
        "cd_passes": _Key("int", 3, lo=0),
        "gain_drop_db": _num(2.0, lo=0.0),
        "gain_penalty": _num(2.0, lo=0.0),
        "scan_points": _Key("int", 17, lo=3),
    },
    "farfield": {
        "sub_samples_per_cell": _Key("int", 8, lo=4),
        "element_exponent": _num(1.0, lo=0.0),
        "theta_step_deg": _num(1.0, lo=0.0, lo_open=True),
        "phi_step_deg": _num(1.0, lo=0.0, lo_open=True),
        "cut_step_deg": _num(0.5, lo=0.0, lo_open=True),
    },
}
_TOP_SCALARS: dict[str, _Key] = {
    "band_ghz": _Key("pair", (28.0, 34.0)),
    "calibration_file": _Key("str|null", None),
}

# calibration key -> (CalibrationConstants field, factor to SI)
_CAL_FIELDS = {
    "c_gap_pf": ("c_gap", 1e-12),
    "c_fringe_pf_per_m": ("c_fringe_per_m", 1e-12),
    "g_leak": ("g_leak", 1.0),
    "sigma": ("sigma", 1.0),
    "psi0": ("psi0", 1.0),
    "y_offset_mm": ("y_offset", 1e-3),
}


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs, in SI units."""

    substrate: SubstrateSpec
    geometry: AntennaGeometry
    specs: DeviceSpecs
    cal: CalibrationConstants
    solver: SolverOptions = field(default_factory=SolverOptions)
    farfield: FarfieldOptions = field(default_factory=FarfieldOptions)
    band: tuple[float, float] = (28e9, 34e9)
    source: str = ""

    def model(self) -> AntennaModel:
        return AntennaModel(self.geometry, self.specs, self.cal, self.farfield, self.solver)

    def check_frequency(self, f: float) -> None:
        lo, hi = self.band
        if not lo * (1 - 1e-12) <= f <= hi * (1 + 1e-12):
            raise ConfigError(
                f"frequency {f / 1e9:.6g} GHz outside configured band "
                f"[{lo / 1e9:.6g}, {hi / 1e9:.6g}] GHz",
                "band_ghz",
                source=self.source,
            )

    def summary(self) -> dict[str, Any]:
        """Resolved values in config units, for echoing."""
        g, s, v, dio = self.geometry, self.substrate, self.specs.varactor, self.specs.diode
        return {
            "substrate": {"eps_r": s.eps_r, "tan_delta": s.tan_delta, "height_mm": s.height * 1e3},
            "geometry": {
                "length_mm": g.length * 1e3,
                "port_to_port_mm": g.port_to_port * 1e3,
                "width_feed_mm": g.width_feed * 1e3,
                "width_mid_mm": g.width_mid * 1e3,
                "cell_period_mm": g.cell_period * 1e3,
                "n_cells": g.n_cells,
                "sub_segments": g.sub_segments,
                "feed_impedance_ohm": g.feed_impedance,
            },
            "varactor": {
                "c_min_pf": v.c_min * 1e12,
                "c_max_pf": v.c_max * 1e12,
                "q": v.q_at_f0,
                "q_ref_ghz": v.f0_q / 1e9,
            },
            "diode": {
                "r_on_ohm": dio.r_on,
                "c_off_ff": dio.c_off * 1e15,
                "l_via_ph": dio.l_via * 1e12,
            },
            "calibration": calibration_to_dict(self.cal),
            "band_ghz": [self.band[0] / 1e9, self.band[1] / 1e9],
        }


def calibration_to_dict(cal: CalibrationConstants) -> dict[str, float]:
    return {k: getattr(cal, name) / scale for k, (name, scale) in _CAL_FIELDS.items()}


# ------------------------------------------------------------------ parsing

def _line_index(text: str) -> dict[tuple[str, ...], int]:
    """1-based source line of every mapping key, by dotted path."""
    out: dict[tuple[str, ...], int] = {}
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return out

    def walk(node, path: tuple[str, ...]) -> None:
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                key = path + (str(k.value),)
                out[key] = k.start_mark.line + 1
                walk(v, key)

    walk(root, ())
    return out


class _Reader:
    def __init__(self, text: str, source: str):
        self.source = source
        self.lines = _line_index(text)
        try:
            self.data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            line = mark.line + 1 if mark is not None else None
            raise ConfigError(f"not valid YAML: {exc}", line=line, source=source) from exc
        if self.data is None:
            self.data = {}
        if not isinstance(self.data, dict):
            raise ConfigError("top level must be a mapping", line=1, source=source)

    def error(self, path: tuple[str, ...], message: str) -> ConfigError:
        # nearest enclosing key that exists in the file, else the document start
        line = 1
        for k in range(len(path), 0, -1):
            if path[:k] in self.lines:
                line = self.lines[path[:k]]
                break
        return ConfigError(message, ".".join(path), line, self.source)

    def section(self, path: tuple[str, ...], data: Any, allowed: dict[str, Any]) -> dict:
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise self.error(path, "expected a mapping")
        for k in data:
            if str(k) not in allowed:
                raise self.error(path + (str(k),), f"unknown key (allowed: {', '.join(allowed)})")
        return data

    def value(self, path: tuple[str, ...], data: dict, spec: _Key) -> Any:
        key = path[-1]
        if key not in data:
            if spec.required:
                raise self.error(path, "missing required key")
            return spec.default
        raw = data[key]
        kind = spec.kind
        if raw is None and kind.endswith("|null"):
            return None
        base = kind.split("|")[0]
        if base == "float":
            v = self._float(path, raw)
        elif base == "int":
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise self.error(path, f"expected an integer, got {raw!r}")
            v = raw
        elif base == "str":
            if not isinstance(raw, str):
                raise self.error(path, f"expected a string, got {raw!r}")
            return raw
        elif base == "pair":
            if not isinstance(raw, list) or len(raw) != 2:
                raise self.error(path, f"expected a two-element list, got {raw!r}")
            v = tuple(self._float(path, x) for x in raw)
            if not v[0] < v[1]:
                raise self.error(path, f"range must be increasing, got {list(v)}")
            return v
        elif base == "table":
            if not isinstance(raw, list) or not raw:
                raise self.error(path, "expected a nonempty list of [f_ghz, q] pairs")
            rows = []
            for row in raw:
                if not isinstance(row, list) or len(row) != 2:
                    raise self.error(path, f"table row must be [f_ghz, q], got {row!r}")
                rows.append((self._float(path, row[0]) * 1e9, self._float(path, row[1])))
            return tuple(rows)
        else:  # pragma: no cover - schema typo
            raise AssertionError(kind)
        self._range(path, v, spec)
        return v

    def _float(self, path: tuple[str, ...], raw: Any) -> float:
        # YAML 1.1 reads "31e9" as a string; accept any numeric literal
        if isinstance(raw, bool):
            raise self.error(path, f"expected a number, got {raw!r}")
        try:
            v = float(raw)
        except (TypeError, ValueError):
            raise self.error(path, f"expected a number, got {raw!r}") from None
        if not math.isfinite(v):
            raise self.error(path, f"expected a finite number, got {raw!r}")
        return v

    def _range(self, path: tuple[str, ...], v: float, spec: _Key) -> None:
        if spec.lo is not None and (v < spec.lo or (spec.lo_open and v == spec.lo)):
            op = ">" if spec.lo_open else ">="
            raise self.error(path, f"value {v:g} out of range: must be {op} {spec.lo:g}")
        if spec.hi is not None and v > spec.hi:
            raise self.error(path, f"value {v:g} out of range: must be <= {spec.hi:g}")


def _read_sections(r: _Reader) -> dict[str, Any]:
    allowed = {**_SCHEMA, **_TOP_SCALARS}
    top = r.section((), r.data, allowed)
    out: dict[str, Any] = {}
    for name, keys in _SCHEMA.items():
        sec = r.section((name,), top.get(name), keys)
        out[name] = {k: r.value((name, k), sec, spec) for k, spec in keys.items()}
    for k, spec in _TOP_SCALARS.items():
        out[k] = r.value((k,), top, spec)
    return out


def _calibration(
    r: _Reader, values: dict[str, Any], base: CalibrationConstants, path: tuple[str, ...]
) -> CalibrationConstants:
    updates = {
        _CAL_FIELDS[k][0]: v * _CAL_FIELDS[k][1] for k, v in values.items() if v is not None
    }
    try:
        return replace(base, **updates)
    except ValueError as exc:
        raise r.error(path, str(exc)) from None


def load_calibration(path: str | Path, base: CalibrationConstants | None = None) -> CalibrationConstants:
    """Read a calibration file: a ``calibration`` mapping plus optional ``fit`` notes."""
    p = Path(path)
    r = _Reader(_read_text(p), str(p))
    top = r.section((), r.data, {"calibration": None, "fit": None})
    sec = r.section(("calibration",), top.get("calibration"), _SCHEMA["calibration"])
    if not sec:
        raise r.error(("calibration",), "missing calibration constants")
    vals = {k: r.value(("calibration", k), sec, spec) for k, spec in _SCHEMA["calibration"].items()}
    return _calibration(r, vals, base or CalibrationConstants(), ("calibration",))


def _read_text(p: Path) -> str:
    return p.read_text(encoding="utf-8")


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a run configuration file.

    Raises:
        ConfigError: unknown, missing or out-of-range keys, a band outside
            the guard rails, or a referenced file that does not exist.
        OSError: the file cannot be read.
    """
    p = Path(path)
    return parse_config(_read_text(p), str(p), p.parent)


def parse_config(text: str, source: str = "<string>", base_dir: Path | None = None) -> RunConfig:
    r = _Reader(text, source)
    v = _read_sections(r)
    mm = 1e-3

    sub_v = v["substrate"]
    substrate = SubstrateSpec(sub_v["eps_r"], sub_v["tan_delta"], sub_v["height_mm"] * mm)

    gv = v["geometry"]
    geometry = _build(
        r,
        ("geometry",),
        lambda: AntennaGeometry(
            length=gv["length_mm"] * mm,
            port_to_port=gv["port_to_port_mm"] * mm,
            width_feed=gv["width_feed_mm"] * mm,
            width_mid=gv["width_mid_mm"] * mm,
            cell_period=gv["cell_period_mm"] * mm,
            n_cells=gv["n_cells"],
            substrate=substrate,
            sub_segments=gv["sub_segments"],
            feed_impedance=gv["feed_impedance_ohm"],
        ),
    )

    vv = v["varactor"]
    if not vv["c_min_pf"] < vv["c_max_pf"]:
        raise r.error(
            ("varactor", "c_min_pf"),
            f"out of range: c_min_pf ({vv['c_min_pf']:g}) must be < c_max_pf ({vv['c_max_pf']:g})",
        )
    q_band = (vv["q_band_ghz"][0] * 1e9, vv["q_band_ghz"][1] * 1e9)
    varactor = _build(
        r,
        ("varactor",),
        lambda: VaractorSpec(
            c_min=vv["c_min_pf"] * 1e-12,
            c_max=vv["c_max_pf"] * 1e-12,
            q_at_f0=vv["q"],
            f0_q=vv["q_ref_ghz"] * 1e9,
            cv_c0=vv["cv_c0_pf"] * 1e-12,
            cv_vj=vv["cv_vj"],
            cv_m=vv["cv_m"],
            q_table=vv["q_table"],
            q_band=q_band,
        ),
    )
    dv = v["diode"]
    diode = DiodeSpec(dv["r_on_ohm"], dv["c_off_ff"] * 1e-15, dv["l_via_ph"] * 1e-12)

    cal = CalibrationConstants()
    if v["calibration_file"] is not None:
        ref = Path(v["calibration_file"])
        if not ref.is_absolute() and base_dir is not None:
            ref = base_dir / ref
        if not ref.is_file():
            raise r.error(("calibration_file",), f"referenced file does not exist: {ref}")
        cal = load_calibration(ref)
    cal = _calibration(r, v["calibration"], cal, ("calibration",))

    sv = v["solver"]
    solver = SolverOptions(
        theta_tol=sv["theta_tol_deg"],
        cd_passes=sv["cd_passes"],
        gain_drop_db=sv["gain_drop_db"],
        gain_penalty=sv["gain_penalty"],
        scan_points=sv["scan_points"],
    )
    fv = v["farfield"]
    farfield = FarfieldOptions(
        sub_samples_per_cell=fv["sub_samples_per_cell"],
        element_exponent=fv["element_exponent"],
        grid=GridSpec(fv["theta_step_deg"], fv["phi_step_deg"], cut_step=fv["cut_step_deg"]),
    )

    band = (v["band_ghz"][0] * 1e9, v["band_ghz"][1] * 1e9)
    lo, hi = BAND_LIMITS_HZ
    if band[0] < lo or band[1] > hi:
        raise r.error(
            ("band_ghz",),
            f"out of range: band must lie within [{lo / 1e9:g}, {hi / 1e9:g}] GHz",
        )
    return RunConfig(
        substrate=substrate,
        geometry=geometry,
        specs=DeviceSpecs(varactor, diode),
        cal=cal,
        solver=solver,
        farfield=farfield,
        band=band,
        source=source,
    )


def _build(r: _Reader, path: tuple[str, ...], make: Callable[[], Any]) -> Any:
    try:
        return make()
    except ValueError as exc:
        raise r.error(path, f"out of range: {exc}") from None


def shipped_path(name: str) -> Path:
    """Path of a data file shipped with the package (e.g. ``nominal.yaml``)."""
    return Path(str(resources.files("hwmlwa") / "data" / name))


def default_config() -> RunConfig:
    return load_config(shipped_path("nominal.yaml"))
