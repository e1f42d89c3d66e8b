import math

import numpy as np
import pytest

from hwmlwa import io
from hwmlwa.cli import (
    DISPERSION_HEADER,
    EXIT_CALIBRATION,
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_UNREACHABLE,
    PATTERN_HEADER,
    QSENSE_HEADER,
    main,
    map_header,
)
from hwmlwa.components import ControlState
from hwmlwa.config import default_config
from hwmlwa.dispersion import dispersion_sample
from hwmlwa.steering import angular_error


def _csv(path):
    header, rows = io.read_csv(path)
    return header, np.array([[float(x) if x != "NaN" else math.nan for x in r] for r in rows])


def test_dispersion_rows_and_columns(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["dispersion", "--f-start", "28e9", "--f-stop", "34e9", "--f-step", "0.5e9", "-o", str(out)]) == 0
    header, data = _csv(out)
    assert tuple(header) == DISPERSION_HEADER
    assert data.shape == (13, 7)
    assert out.read_bytes().count(b"\r") == 0
    assert np.all(np.isnan(data[:, 4]))  # n = 0 never radiates on the slow line
    assert np.all(np.diff(data[:, 5]) > 0)  # frequency scanning


def test_dispersion_beta_column_matches_transverse_roots(tmp_path):
    out = tmp_path / "d.csv"
    main(["dispersion", "--c-pf", "0.6", "--f-start", "31e9", "--f-stop", "31e9", "-o", str(out)])
    _, data = _csv(out)
    cfg = default_config()
    disp = dispersion_sample(cfg.geometry, ControlState.uniform(0.6e-12), cfg.cal, 31e9)
    k0 = disp.k0
    beta = np.mean([math.sqrt(c.eps_eff * k0 * k0 - c.tau) for c in disp.per_cell])
    assert data[0, 1] == pytest.approx(beta, rel=1e-8)
    assert data[0, 3] == pytest.approx(k0, rel=1e-8)


def test_pattern_csv_and_sidecar(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["pattern", "--f", "31e9", "--c-pf", "0.5", "--index", "2", "-o", str(out)]) == 0
    header, rows = io.read_csv(out)
    assert tuple(header) == PATTERN_HEADER
    assert len(rows) == 181 * 181
    import json

    m = json.loads(out.with_suffix(".json").read_text())
    assert set(m) >= {"peak", "hpbw_deg", "s11_db", "budget", "realized_gain_dbi", "flags"}
    assert m["state"]["diodes_hex"] == "003"
    gains = np.array([float(r[2]) for r in rows])
    assert gains.max() == pytest.approx(m["realized_gain_dbi"], abs=0.05)


def test_map_at_32ghz_has_117_rows(tmp_path):
    out = tmp_path / "m.csv"
    assert main(["map", "--f", "32e9", "-o", str(out)]) == 0
    header, rows = io.read_csv(out)
    assert tuple(header) == map_header(12)
    assert header[:2] == ["c_pf_1", "c_pf_2"] and header[11] == "c_pf_12"
    assert len(rows) == 117


def test_steer_then_pattern_round_trip(tmp_path, capsys):
    state = tmp_path / "s.yaml"
    assert main(["steer", "--theta", "20", "--phi", "-10", "--f", "31e9", "-o", str(state)]) == 0
    assert capsys.readouterr().out.startswith("state c_pf=")
    out = tmp_path / "p.csv"
    assert main(["pattern", "--state", str(state), "--f", "31e9", "-o", str(out)]) == 0
    import json

    peak = json.loads(out.with_suffix(".json").read_text())["peak"]
    assert angular_error(peak["theta_deg"], peak["phi_deg"], 20.0, -10.0) <= 10.0


def test_qsense_columns_and_gain_delta(tmp_path):
    out = tmp_path / "q.csv"
    assert main(["qsense", "--q", "10,20", "-o", str(out)]) == 0
    header, data = _csv(out)
    assert tuple(header) == QSENSE_HEADER
    assert data.shape == (26, 4)
    g10, g20 = data[data[:, 1] == 10, 3], data[data[:, 1] == 20, 3]
    assert abs(g10.max() - g20.max()) <= 1.0


def test_touchstone_command(tmp_path):
    out = tmp_path / "a.s2p"
    assert main(["touchstone", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# GHz S RI R 50" and len(lines) == 14
    for _, s in io.read_touchstone(out):
        assert abs(s.s12 - s.s21) < 1e-8


@pytest.mark.parametrize(
    "argv",
    [
        ["dispersion", "--f-start", "30e9", "--f-stop", "32e9"],
        ["map", "--f", "31e9", "--c-grid-pf", "0.2,0.6"],
        ["pattern", "--f", "31e9", "--c-pf", "0.3", "--index", "-4"],
        ["qsense", "--f-start", "30e9", "--f-stop", "31e9"],
    ],
)
def test_outputs_are_byte_identical(tmp_path, argv):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["-o", str(a)]) == 0
    assert main(argv + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_show_config_echoes_design_constants(capsys):
    assert main(["show-config"]) == 0
    out = capsys.readouterr().out
    assert "eps_r: 3.66" in out and "cell_period_mm: 5.0" in out


def test_exit_code_config(tmp_path, capsys):
    cfg = tmp_path / "empty.yaml"
    cfg.write_text("")
    assert main(["show-config", "--config", str(cfg)]) == EXIT_CONFIG
    assert "substrate.eps_r" in capsys.readouterr().err
    assert main(["pattern", "--f", "40e9", "-o", str(tmp_path / "x.csv")]) == EXIT_CONFIG
    assert main(["pattern", "--f", "31e9", "--c-pf", "3", "-o", str(tmp_path / "x.csv")]) == EXIT_CONFIG


def test_exit_code_unreachable(tmp_path, capsys):
    state = tmp_path / "s.yaml"
    assert main(["steer", "--theta", "85", "--phi", "0", "--f", "31e9", "-o", str(state)]) == EXIT_UNREACHABLE
    err = capsys.readouterr().err
    assert err.startswith("error: unreachable:") and "error_deg=" in err
    assert state.exists()  # the nearest state is still written


def test_exit_code_io(tmp_path):
    assert main(["show-config", "--config", str(tmp_path / "missing.yaml")]) == EXIT_IO
    assert main(["dispersion", "-o", str(tmp_path / "no" / "dir.csv")]) == EXIT_IO


def test_exit_code_calibration(tmp_path):
    anchors = tmp_path / "a.yaml"
    anchors.write_text("anchors:\n  - {c_pf: 0.2, f_ghz: 31, observable: theta, target: 80}\n")
    out = tmp_path / "c.yaml"
    argv = ["calibrate", "--anchors", str(anchors), "--free", "psi0", "--max-iter", "100", "-o", str(out)]
    assert main(argv) == EXIT_CALIBRATION
    assert not out.exists()


def test_calibrate_writes_loadable_file(tmp_path):
    anchors = tmp_path / "a.yaml"
    anchors.write_text("anchors:\n  - {c_pf: 0.447213595, index: 6, f_ghz: 31, observable: phi, target: 40}\n")
    out = tmp_path / "c.yaml"
    assert main(["calibrate", "--anchors", str(anchors), "--free", "psi0", "-o", str(out)]) == 0
    from hwmlwa.config import load_calibration

    assert load_calibration(out).psi0 > 0
